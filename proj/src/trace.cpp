#include "cvr/trace.hpp"

#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace cvr {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trace_to_csv(const std::vector<TraceRecord>& records) {
  std::string out =
      "epoch,grad_evals,rel_grad_norm,suboptimality,virtual_time,wall_time_s\n";
  for (const auto& r : records) {
    out += std::to_string(r.epoch);
    out += ',';
    out += std::to_string(r.grad_evals);
    out += ',';
    out += format_g17(r.rel_grad_norm);
    out += ',';
    out += format_g17(r.suboptimality);
    out += ',';
    out += format_g17(r.virtual_time);
    out += ',';
    out += format_g17(r.wall_time_s);
    out += '\n';
  }
  return out;
}

std::string trace_to_json(const std::vector<TraceRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    arr.push_back({{"epoch", r.epoch},
                   {"grad_evals", r.grad_evals},
                   {"rel_grad_norm", r.rel_grad_norm},
                   {"suboptimality", r.suboptimality},
                   {"virtual_time", r.virtual_time},
                   {"wall_time_s", r.wall_time_s}});
  }
  return arr.dump(2) + "\n";
}

void export_trace(const std::vector<TraceRecord>& records, TraceFormat format,
                  const std::filesystem::path& path) {
  if (records.empty())
    throw std::runtime_error("export_trace: no records to write");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("export_trace: cannot write " + path.string());
  out << (format == TraceFormat::Csv ? trace_to_csv(records)
                                     : trace_to_json(records));
  if (!out) throw std::runtime_error("export_trace: write failed for " + path.string());
}

}  // namespace cvr
