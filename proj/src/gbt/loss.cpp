#include "afrrcast/gbt/loss.hpp"

#include <cmath>

#include "afrrcast/errors.hpp"
#include "afrrcast/util/quantile.hpp"

namespace afrrcast {

LossSpec LossSpec::quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) throw UsageError("quantile level must lie in (0,1)");
  return {Kind::quantile, q};
}

std::string LossSpec::tag() const {
  if (kind == Kind::l2) return "l2";
  return "q" + std::to_string(static_cast<int>(std::lround(q * 100.0)));
}

std::string LossSpec::name() const {
  if (kind == Kind::l2) return "l2";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "quantile(%g)", q);
  return buf;
}

LossSpec LossSpec::from_name(const std::string& text) {
  if (text == "l2") return l2();
  if (text.rfind("quantile(", 0) == 0 && text.back() == ')')
    return quantile(std::stod(text.substr(9, text.size() - 10)));
  throw UsageError("unknown loss '" + text + "' (use \"l2\" or \"quantile(q)\")");
}

GradHess grad_hess(const LossSpec& loss, double y, double pred) {
  if (loss.kind == LossSpec::Kind::l2) return {pred - y, 1.0};
  return {y > pred ? -loss.q : (1.0 - loss.q), 1.0};
}

double row_loss(const LossSpec& loss, double y, double pred) {
  if (loss.kind == LossSpec::Kind::l2) {
    const double d = pred - y;
    return d * d;
  }
  return y >= pred ? loss.q * (y - pred) : (1.0 - loss.q) * (pred - y);
}

double mean_loss(const LossSpec& loss, std::span<const double> y, std::span<const double> pred) {
  if (y.size() != pred.size() || y.empty())
    throw DataError("mean_loss: length mismatch or empty input");
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) total += row_loss(loss, y[i], pred[i]);
  return total / static_cast<double>(y.size());
}

double base_score(const LossSpec& loss, std::span<const double> y) {
  if (y.empty()) throw DataError("base_score: empty target");
  if (loss.kind == LossSpec::Kind::l2) return mean(y);
  return quantile_linear(y, loss.q);
}

}  // namespace afrrcast
