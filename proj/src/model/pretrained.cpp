#include "hat/model/pretrained.hpp"

#include <fstream>
#include <sstream>

#include "hat/errors.hpp"

namespace hat::model {

std::size_t load_pretrained(const std::filesystem::path& path, const data::Vocabulary& vocabulary,
                            EmbeddingTable& table) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  const std::size_t dim = table.dim();
  std::size_t replaced = 0;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;
    std::vector<double> values;
    std::string item;
    while (fields >> item) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw DataError(path.string() + ":" + std::to_string(line_no) + ": non-numeric value '" + item + "'");
      }
    }
    if (line_no == 1 && values.size() == 1 && word.find_first_not_of("0123456789") == std::string::npos) continue;
    if (values.size() != dim) {
      throw ShapeError(path.string() + ":" + std::to_string(line_no) + ": vector of width " +
                       std::to_string(values.size()) + " for an embedding table of width " + std::to_string(dim));
    }
    const std::int32_t id = vocabulary.id(word);
    if (id == data::kUnknownId || id == data::kPadId) continue;
    std::copy(values.begin(), values.end(), table.weights.data() + static_cast<std::size_t>(id) * dim);
    ++replaced;
  }
  return replaced;
}

}  // namespace hat::model
