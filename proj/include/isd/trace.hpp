#ifndef ISD_TRACE_HPP
#define ISD_TRACE_HPP

#include <chrono>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace isd {

/// Per-stage record of a pipeline run: set sizes, booleans and small values.
/// Wall-clock timings are kept separately and only emitted on request, so
/// that identical configurations produce byte-identical trace files.
struct PipelineTrace {
  struct Stage {
    std::string name;
    nlohmann::ordered_json data = nlohmann::ordered_json::object();
    double elapsed_s = 0;
  };
  std::vector<Stage> stages;

  Stage& begin(const std::string& name) {
    stages.push_back({name});
    start_ = std::chrono::steady_clock::now();
    return stages.back();
  }

  void end() {
    if (!stages.empty())
      stages.back().elapsed_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  nlohmann::ordered_json to_json(bool with_timings = false) const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& s : stages) {
      nlohmann::ordered_json entry;
      entry["stage"] = s.name;
      entry["data"] = s.data;
      if (with_timings) entry["elapsed_s"] = s.elapsed_s;
      arr.push_back(std::move(entry));
    }
    return arr;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace isd

#endif  // ISD_TRACE_HPP
