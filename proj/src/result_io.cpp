#include "blockfit/result_io.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace blockfit {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json fit_core_to_json(const FitResult& result) {
  json doc;
  doc["labels"] = result.labels;
  doc["pi"] = result.params.pi;
  doc["P"] = matrix_to_json(result.params.P);
  doc["objective_trace"] = result.objective_trace;
  doc["converged"] = result.converged;
  doc["outer_iters"] = static_cast<int>(result.objective_trace.size()) - 1;
  doc["runtime_ms"] = result.runtime_ms;
  return doc;
}

}  // namespace

std::string fit_result_to_json(const FitResult& result, std::uint64_t seed) {
  json doc = fit_core_to_json(result);
  doc["model"] = "sbm";
  doc["seed"] = seed;
  return doc.dump(2) + "\n";
}

std::string dc_fit_result_to_json(const DcFitResult& result, std::uint64_t seed) {
  json doc;
  doc["model"] = "dcsbm";
  doc["labels"] = result.labels;
  doc["pi"] = result.params.pi;
  doc["P"] = matrix_to_json(result.params.Lambda);
  doc["Lambda"] = matrix_to_json(result.params.Lambda);
  doc["theta"] = result.params.theta;
  doc["objective_trace"] = result.objective_trace;
  doc["converged"] = result.converged;
  doc["outer_iters"] = static_cast<int>(result.objective_trace.size()) - 1;
  doc["runtime_ms"] = result.runtime_ms;
  doc["seed"] = seed;
  return doc.dump(2) + "\n";
}

std::string bisbm_fit_result_to_json(const BisbmFitResult& result, std::uint64_t seed) {
  json doc = fit_core_to_json(result.c2);
  doc["model"] = "bisbm";
  doc["labels_c1"] = result.c1.labels;
  doc["pi_c1"] = result.c1.params.pi;
  doc["P_c1"] = matrix_to_json(result.c1.params.P);
  doc["objective_trace_c1"] = result.c1.objective_trace;
  doc["converged"] = result.c2.converged && result.c1.converged;
  doc["outer_iters_c1"] = static_cast<int>(result.c1.objective_trace.size()) - 1;
  doc["runtime_ms"] = result.c2.runtime_ms + result.c1.runtime_ms;
  doc["seed"] = seed;
  return doc.dump(2) + "\n";
}

namespace {

LabelVector parse_label_tokens(const std::string& content, const std::string& origin) {
  LabelVector labels;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        labels.push_back(v);
      } catch (const std::exception&) {
        throw DataError(origin + ": expected an integer label, got '" + tok + "'");
      }
    }
  }
  if (labels.empty()) throw DataError(origin + ": no labels found");
  return labels;
}

}  // namespace

LabelVector labels_from_result_text(const std::string& content, const std::string& key) {
  const std::size_t first = content.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && content[first] == '{') {
    json doc;
    try {
      doc = json::parse(content);
    } catch (const json::exception& ex) {
      throw DataError(std::string("result document is not valid JSON: ") + ex.what());
    }
    if (!doc.contains(key) || !doc[key].is_array()) {
      throw DataError("result document has no '" + key + "' array");
    }
    LabelVector labels;
    for (const auto& v : doc[key]) {
      if (!v.is_number_integer()) throw DataError("'" + key + "' contains a non-integer entry");
      labels.push_back(v.get<int>());
    }
    if (labels.empty()) throw DataError("'" + key + "' is empty");
    return labels;
  }
  return parse_label_tokens(content, "label text");
}

LabelVector load_labels_file(const std::string& path) {
  return parse_label_tokens(read_text_file(path), path);
}

void write_labels_file(const std::string& path, const LabelVector& labels) {
  std::ostringstream out;
  for (int v : labels) out << v << '\n';
  write_text_file(path, out.str());
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw DataError("failed while reading file: " + path);
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open file for writing: " + path);
  out << content;
  out.flush();
  if (!out) throw DataError("failed while writing file: " + path);
}

std::string file_digest(const std::string& path) {
  const std::string content = read_text_file(path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : content) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

}  // namespace blockfit
