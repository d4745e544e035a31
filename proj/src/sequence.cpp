#include "tomotest/sequence.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace tomotest {

std::vector<Index> SequenceVector::support() const {
  std::vector<Index> out;
  out.reserve(entries_.size());
  for (const auto& [nu, value] : entries_) out.push_back(nu);
  return out;
}

Eigen::ArrayXd SequenceVector::values_on(const std::vector<Index>& order) const {
  Eigen::ArrayXd out(static_cast<Eigen::Index>(order.size()));
  for (std::size_t i = 0; i < order.size(); ++i) out[static_cast<Eigen::Index>(i)] = at(order[i]);
  return out;
}

std::string SequenceVector::to_csv() const {
  std::string out = "j,l,value\n";
  char buf[64];
  for (const auto& [nu, value] : entries_) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.17g\n", nu.j, nu.l, value);
    out += buf;
  }
  return out;
}

SequenceVector SequenceVector::from_csv(const std::string& text) {
  SequenceVector out;
  std::istringstream in(text);
  std::string line;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != "j,l,value")
        throw std::invalid_argument("SequenceVector::from_csv: expected header j,l,value");
      saw_header = true;
      continue;
    }
    int j = 0, l = 0;
    double value = 0.0;
    if (std::sscanf(line.c_str(), "%d,%d,%lf", &j, &l, &value) != 3)
      throw std::invalid_argument("SequenceVector::from_csv: bad line: " + line);
    if (j < 0 || l < 0)
      throw std::invalid_argument("SequenceVector::from_csv: negative index: " + line);
    out.set(Index{j, l}, value);
  }
  if (!saw_header) throw std::invalid_argument("SequenceVector::from_csv: empty input");
  return out;
}

std::string SequenceVector::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [nu, value] : entries_) arr.push_back({nu.j, nu.l, value});
  return arr.dump();
}

SequenceVector SequenceVector::from_json(const std::string& text) {
  nlohmann::json arr = nlohmann::json::parse(text);
  if (!arr.is_array()) throw std::invalid_argument("SequenceVector::from_json: expected an array");
  SequenceVector out;
  for (const auto& item : arr) {
    if (!item.is_array() || item.size() != 3)
      throw std::invalid_argument("SequenceVector::from_json: expected [j, l, value] triples");
    int j = item[0].get<int>();
    int l = item[1].get<int>();
    if (j < 0 || l < 0) throw std::invalid_argument("SequenceVector::from_json: negative index");
    out.set(Index{j, l}, item[2].get<double>());
  }
  return out;
}

}  // namespace tomotest
