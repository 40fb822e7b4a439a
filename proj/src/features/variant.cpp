#include "afrrcast/features/variant.hpp"

#include <functional>
#include <unordered_map>

#include "afrrcast/errors.hpp"

namespace afrrcast {

std::string to_string(VariantName v) {
  switch (v) {
    case VariantName::daily_profile: return "daily_profile";
    case VariantName::day_ahead: return "day_ahead";
    case VariantName::day_ahead_igcc: return "day_ahead_igcc";
    case VariantName::extended: return "extended";
    case VariantName::full: return "full";
  }
  return "?";
}

std::string to_string(TargetSide t) {
  return t == TargetSide::afrr_pos ? "afrr_pos" : "afrr_neg";
}

VariantName variant_from_string(const std::string& s) {
  if (s == "daily_profile") return VariantName::daily_profile;
  if (s == "day_ahead") return VariantName::day_ahead;
  if (s == "day_ahead_igcc") return VariantName::day_ahead_igcc;
  if (s == "extended") return VariantName::extended;
  if (s == "full") return VariantName::full;
  throw UsageError("unknown model variant '" + s + "'");
}

TargetSide target_from_string(const std::string& s) {
  if (s == "afrr_pos") return TargetSide::afrr_pos;
  if (s == "afrr_neg") return TargetSide::afrr_neg;
  throw UsageError("unknown target '" + s + "' (use afrr_pos or afrr_neg)");
}

void FeatureMatrix::row(std::size_t r, std::span<double> out) const {
  for (std::size_t c = 0; c < columns.size(); ++c) out[c] = columns[c][r];
}

std::vector<double> FeatureMatrix::row(std::size_t r) const {
  std::vector<double> out(columns.size());
  row(r, out);
  return out;
}

FeatureMatrix FeatureMatrix::subset(std::span<const int> rows) const {
  FeatureMatrix out;
  out.names = names;
  out.index.reserve(rows.size());
  for (int r : rows) out.index.push_back(index[static_cast<std::size_t>(r)]);
  out.columns.resize(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    out.columns[c].reserve(rows.size());
    for (int r : rows) out.columns[c].push_back(columns[c][static_cast<std::size_t>(r)]);
  }
  return out;
}

FeatureMatrix select_variant(const TimeTable& table, const ModelVariant& variant) {
  // Base rule, before the engineered-column closure.
  auto base_included = [&](const ColumnMeta& m) -> bool {
    if (m.kind == ColumnKind::target || m.kind == ColumnKind::benchmark) return false;
    switch (variant.name) {
      case VariantName::daily_profile:
        return false;
      case VariantName::full:
        return true;
      case VariantName::day_ahead:
        return m.kind == ColumnKind::calendar ||
               (m.kind == ColumnKind::day_ahead && m.area == Area::DE);
      case VariantName::day_ahead_igcc:
        return m.kind == ColumnKind::calendar || m.kind == ColumnKind::day_ahead;
      case VariantName::extended:
        return m.kind == ColumnKind::calendar ||
               (m.kind == ColumnKind::day_ahead && m.area == Area::DE) ||
               (m.kind == ColumnKind::actual && m.area == Area::DE && !m.dispatchable);
    }
    return false;
  };

  // Engineered columns follow their sources: included iff every source is.
  std::unordered_map<std::string, int> memo;  // -1 evaluating, 0 out, 1 in
  std::function<bool(const std::string&)> included = [&](const std::string& name) -> bool {
    auto it = memo.find(name);
    if (it != memo.end()) {
      if (it->second == -1)
        throw DataError("cyclic engineered-column sources at '" + name + "'");
      return it->second == 1;
    }
    if (!table.has(name)) return false;  // source dropped after aggregation
    const ColumnMeta& m = table.meta(name);
    if (m.kind != ColumnKind::engineered) return base_included(m);
    memo[name] = -1;
    bool in = variant.name != VariantName::daily_profile;
    if (variant.name != VariantName::full) {
      if (m.sources.empty()) in = false;
      for (const auto& src : m.sources)
        if (!included(src)) in = false;
    }
    memo[name] = in ? 1 : 0;
    return in;
  };

  FeatureMatrix out;
  out.index = table.index();
  for (const auto& name : table.names()) {
    const ColumnMeta& m = table.meta(name);
    if (m.kind == ColumnKind::target || m.kind == ColumnKind::benchmark) continue;
    const bool in = m.kind == ColumnKind::engineered ? included(name) : base_included(m);
    if (in) {
      out.names.push_back(name);
      out.columns.push_back(table.col(name));
    }
  }

  // A variant whose defining class has no columns at all cannot be built.
  auto require_class = [&](ColumnKind kind, Area area, bool need_nondispatch,
                           const std::string& what) {
    for (const auto& name : table.names()) {
      const ColumnMeta& m = table.meta(name);
      if (m.kind == kind && m.area == area && (!need_nondispatch || !m.dispatchable)) return;
    }
    throw DataError("variant '" + to_string(variant.name) + "' requires " + what +
                    ", but the table has none");
  };
  switch (variant.name) {
    case VariantName::daily_profile:
      break;
    case VariantName::day_ahead:
      require_class(ColumnKind::day_ahead, Area::DE, false, "German day-ahead columns");
      break;
    case VariantName::day_ahead_igcc:
      require_class(ColumnKind::day_ahead, Area::DE, false, "German day-ahead columns");
      require_class(ColumnKind::day_ahead, Area::IGCC_other, false,
                    "aggregated IGCC day-ahead columns");
      break;
    case VariantName::extended:
      require_class(ColumnKind::day_ahead, Area::DE, false, "German day-ahead columns");
      require_class(ColumnKind::actual, Area::DE, true, "non-dispatchable actual columns");
      break;
    case VariantName::full:
      if (out.names.empty())
        throw DataError("variant 'full' selected no feature columns");
      break;
  }

  return out;
}

}  // namespace afrrcast
