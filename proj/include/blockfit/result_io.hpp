#pragma once

#include <cstdint>
#include <string>

#include "blockfit/bisbm.hpp"
#include "blockfit/dcsbm.hpp"
#include "blockfit/ppl.hpp"
#include "blockfit/types.hpp"

namespace blockfit {

// Result documents. Every fit JSON carries at least
//   {"model", "labels", "pi", "P", "objective_trace", "converged",
//    "outer_iters", "runtime_ms", "seed"};
// the degree-corrected variant adds "Lambda" and "theta"; the bipartite
// variant adds the second side under *_c1 keys ("labels" holds the
// column-side labels c2).
std::string fit_result_to_json(const FitResult& result, std::uint64_t seed);
std::string dc_fit_result_to_json(const DcFitResult& result, std::uint64_t seed);
std::string bisbm_fit_result_to_json(const BisbmFitResult& result, std::uint64_t seed);

// Label vector from a result document (field `key`), or from a plain
// whitespace-separated label text when the content is not a JSON object.
LabelVector labels_from_result_text(const std::string& content, const std::string& key = "labels");

// Plain label files: whitespace-separated integers, '#' starts a comment.
LabelVector load_labels_file(const std::string& path);
void write_labels_file(const std::string& path, const LabelVector& labels);

std::string read_text_file(const std::string& path);  // DataError when unreadable
void write_text_file(const std::string& path, const std::string& content);

// FNV-1a 64-bit content digest, hex-encoded; used in run manifests.
std::string file_digest(const std::string& path);

}  // namespace blockfit
