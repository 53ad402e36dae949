#ifndef CVR_TRACE_HPP
#define CVR_TRACE_HPP

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvr {

struct TraceRecord {
  long epoch = 0;
  std::uint64_t grad_evals = 0;  // algorithm gradient evaluations, cumulative
  double rel_grad_norm = 1.0;    // ||grad f(x)|| / ||grad f(x0)||
  double suboptimality = 0.0;    // f(x) - f(x*) when x* is known, else NaN
  double virtual_time = 0.0;
  double wall_time_s = 0.0;
};

struct RunResult {
  Eigen::VectorXd x;
  std::vector<TraceRecord> trace;
  std::uint64_t grad_evals = 0;
  std::uint64_t metric_evals = 0;  // gradient work spent on metrics only
};

// Raised when an iterate norm crosses the 1e10 divergence threshold.
// Carries the trace recorded so far so callers can flush it.
class divergence_error : public std::runtime_error {
 public:
  divergence_error(const std::string& what, RunResult partial)
      : std::runtime_error(what), partial(std::move(partial)) {}
  RunResult partial;
};

enum class TraceFormat { Csv, Json };

// CSV header: epoch,grad_evals,rel_grad_norm,suboptimality,virtual_time,wall_time_s
// Floats are written with 17 significant digits. JSON is an array of
// objects with the same keys.
std::string trace_to_csv(const std::vector<TraceRecord>& records);
std::string trace_to_json(const std::vector<TraceRecord>& records);

// Writes a nonempty trace to `path`; throws std::runtime_error on an
// unwritable path or empty input.
void export_trace(const std::vector<TraceRecord>& records, TraceFormat format,
                  const std::filesystem::path& path);

// "%.17g" rendering used everywhere a float reaches a file.
std::string format_g17(double v);

}  // namespace cvr

#endif  // CVR_TRACE_HPP
