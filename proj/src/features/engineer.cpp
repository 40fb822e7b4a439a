#include "afrrcast/features/engineer.hpp"

#include <algorithm>

#include "afrrcast/errors.hpp"

namespace afrrcast {

std::vector<double> upsample(std::span<const double> coarse, int factor, UpsampleMode mode) {
  if (factor < 1) throw DataError("upsample: factor must be >= 1");
  const std::size_t m = coarse.size();
  std::vector<double> out(m * static_cast<std::size_t>(factor), kMissing);
  if (m == 0) return out;

  if (mode == UpsampleMode::pad || factor == 1) {
    for (std::size_t i = 0; i < m; ++i)
      for (int j = 0; j < factor; ++j) out[i * factor + j] = coarse[i];
    return out;
  }

  std::size_t known = 0;
  for (double v : coarse)
    if (!is_missing(v)) ++known;
  if (known < 2) throw DataError("upsample: linear mode needs at least 2 non-missing anchors");

  for (std::size_t i = 0; i < m; ++i) {
    out[i * factor] = coarse[i];
    const bool last = (i + 1 == m);
    for (int j = 1; j < factor; ++j) {
      if (last) {
        out[i * factor + j] = coarse[i];  // trailing segment held flat
      } else if (!is_missing(coarse[i]) && !is_missing(coarse[i + 1])) {
        const double frac = static_cast<double>(j) / static_cast<double>(factor);
        out[i * factor + j] = coarse[i] + frac * (coarse[i + 1] - coarse[i]);
      }
    }
  }
  return out;
}

std::vector<double> ramp(std::span<const double> series) {
  std::vector<double> out(series.size(), kMissing);
  for (std::size_t t = 1; t < series.size(); ++t)
    if (!is_missing(series[t]) && !is_missing(series[t - 1]))
      out[t] = series[t] - series[t - 1];
  return out;
}

std::vector<double> forecast_error(std::span<const double> forecast,
                                   std::span<const double> actual) {
  if (forecast.size() != actual.size())
    throw DataError("forecast_error: series lengths differ (" + std::to_string(forecast.size()) +
                    " vs " + std::to_string(actual.size()) + ")");
  std::vector<double> out(forecast.size(), kMissing);
  for (std::size_t t = 0; t < forecast.size(); ++t)
    if (!is_missing(forecast[t]) && !is_missing(actual[t])) out[t] = forecast[t] - actual[t];
  return out;
}

std::vector<double> flow_balance(const std::vector<std::span<const double>>& inflows,
                                 const std::vector<std::span<const double>>& outflows,
                                 std::size_t n_rows) {
  std::vector<double> out(n_rows, 0.0);
  auto add = [&](const std::vector<std::span<const double>>& group, double sign) {
    for (const auto& s : group) {
      if (s.size() != n_rows) throw DataError("flow_balance: series length mismatch");
      for (std::size_t t = 0; t < n_rows; ++t) {
        if (is_missing(out[t])) continue;
        out[t] = is_missing(s[t]) ? kMissing : out[t] + sign * s[t];
      }
    }
  };
  add(inflows, +1.0);
  add(outflows, -1.0);
  return out;
}

std::vector<double> aggregate_igcc(const std::vector<const ColumnMeta*>& metas,
                                   const std::vector<std::span<const double>>& series) {
  if (metas.size() != series.size() || series.empty())
    throw DataError("aggregate_igcc: needs at least one per-country series");
  for (const auto* m : metas)
    if (m->area == Area::DE)
      throw DataError("aggregate_igcc: Germany ('" + m->name +
                      "') must not be part of the IGCC aggregate");
  const std::size_t n = series[0].size();
  std::vector<double> out(n, 0.0);
  for (const auto& s : series) {
    if (s.size() != n) throw DataError("aggregate_igcc: series length mismatch");
    for (std::size_t t = 0; t < n; ++t) {
      if (is_missing(out[t])) continue;
      out[t] = is_missing(s[t]) ? kMissing : out[t] + s[t];
    }
  }
  return out;
}

CalendarColumns calendar_features(std::span<const UnixSeconds> index, const TimeZoneRule& zone) {
  CalendarColumns cols;
  cols.hour.reserve(index.size());
  cols.weekday.reserve(index.size());
  cols.month.reserve(index.size());
  for (UnixSeconds t : index) {
    const int offset = zone.offset_minutes_at(t);
    const UnixSeconds local = t + static_cast<UnixSeconds>(offset) * 60;
    const CivilTime c = unix_to_civil(local);
    cols.hour.push_back(c.hour);
    cols.weekday.push_back(weekday_of(local));
    cols.month.push_back(c.month);
  }
  return cols;
}

namespace {

// Anchor extraction for a column stored dense on the 15-min grid whose
// native resolution is coarser: every factor-th row is an anchor.
std::vector<double> extract_anchors(const std::vector<double>& dense, int factor) {
  std::vector<double> coarse;
  coarse.reserve(dense.size() / factor + 1);
  for (std::size_t i = 0; i < dense.size(); i += static_cast<std::size_t>(factor))
    coarse.push_back(dense[i]);
  return coarse;
}

}  // namespace

TimeTable engineer_features(const TimeTable& table, const Manifest& manifest) {
  TimeTable work = table;
  const std::size_t n = table.n_rows();

  // 1. Upsample coarse-native columns in place.
  for (const auto& name : table.names()) {
    const ColumnMeta& meta = table.meta(name);
    if (meta.native_resolution_minutes <= 15) continue;
    const int factor = meta.native_resolution_minutes / 15;
    if (factor * 15 != meta.native_resolution_minutes)
      throw DataError("column '" + name + "': native resolution " +
                      std::to_string(meta.native_resolution_minutes) +
                      " is not a multiple of 15 minutes");
    const std::int64_t coarse_seconds = static_cast<std::int64_t>(meta.native_resolution_minutes) * 60;
    if (table.index().front() % coarse_seconds != 0)
      throw DataError("column '" + name + "': table start is not aligned to its " +
                      std::to_string(meta.native_resolution_minutes) + "-minute resolution");
    const UpsampleMode mode = meta.upsample == "linear" ? UpsampleMode::linear : UpsampleMode::pad;
    std::vector<double> dense = upsample(extract_anchors(work.col(name), factor), factor, mode);
    dense.resize(n);
    work = work.with_replaced(name, std::move(dense));
  }

  std::vector<ColumnMeta> new_meta;
  std::vector<std::vector<double>> new_cols;
  auto add_column = [&](ColumnMeta meta, std::vector<double> values) {
    new_meta.push_back(std::move(meta));
    new_cols.push_back(std::move(values));
  };

  // 2. Flow balances from per-neighbour series; members are dropped after.
  std::vector<std::string> drop;
  for (const auto& fb : manifest.flow_balances) {
    std::vector<std::span<const double>> in, out;
    for (const auto& cn : fb.inflows) {
      if (!work.has(cn)) throw DataError("flow balance '" + fb.name + "': no column '" + cn + "'");
      in.emplace_back(work.col(cn));
      drop.push_back(cn);
    }
    for (const auto& cn : fb.outflows) {
      if (!work.has(cn)) throw DataError("flow balance '" + fb.name + "': no column '" + cn + "'");
      out.emplace_back(work.col(cn));
      drop.push_back(cn);
    }
    ColumnMeta m;
    m.name = fb.name;
    m.unit = fb.unit;
    m.kind = fb.kind;
    m.area = Area::DE;
    for (const auto& cn : fb.inflows) m.sources.push_back(cn);
    for (const auto& cn : fb.outflows) m.sources.push_back(cn);
    add_column(std::move(m), flow_balance(in, out, n));
  }

  // 3. IGCC aggregates; per-country members are dropped after.
  for (const auto& agg : manifest.igcc_aggregates) {
    std::vector<const ColumnMeta*> metas;
    std::vector<std::span<const double>> series;
    for (const auto& cn : agg.members) {
      if (!work.has(cn))
        throw DataError("IGCC aggregate '" + agg.name + "': no column '" + cn + "'");
      metas.push_back(&work.meta(cn));
      series.emplace_back(work.col(cn));
      drop.push_back(cn);
    }
    ColumnMeta m;
    m.name = agg.name;
    m.unit = metas.empty() ? "" : metas.front()->unit;
    m.kind = ColumnKind::day_ahead;
    m.area = Area::IGCC_other;
    m.sources = agg.members;
    add_column(std::move(m), aggregate_igcc(metas, series));
  }

  TimeTable staged = work.with_columns(new_meta, new_cols).without_columns(drop);
  new_meta.clear();
  new_cols.clear();

  // 4. Forecast errors (including the unscheduled-flow difference).
  for (const auto& fe : manifest.forecast_errors) {
    if (!staged.has(fe.forecast))
      throw DataError("forecast error '" + fe.label + "': no column '" + fe.forecast + "'");
    if (!staged.has(fe.actual))
      throw DataError("forecast error '" + fe.label + "': no column '" + fe.actual + "'");
    ColumnMeta m;
    m.name = fe.literal_name ? fe.label : "forecast error " + fe.label;
    m.unit = staged.meta(fe.forecast).unit;
    m.kind = ColumnKind::engineered;
    m.area = staged.meta(fe.forecast).area;
    m.sources = {fe.forecast, fe.actual};
    add_column(std::move(m), forecast_error(staged.col(fe.forecast), staged.col(fe.actual)));
  }

  // 5. Ramps of every feature column unless excluded.
  for (const auto& name : staged.names()) {
    const ColumnMeta& meta = staged.meta(name);
    if (meta.kind != ColumnKind::day_ahead && meta.kind != ColumnKind::actual) continue;
    if (std::find(manifest.ramp_exclude.begin(), manifest.ramp_exclude.end(), name) !=
        manifest.ramp_exclude.end())
      continue;
    ColumnMeta m;
    m.name = name + " ramp";
    m.unit = meta.unit;
    m.kind = ColumnKind::engineered;
    m.area = meta.area;
    m.sources = {name};
    add_column(std::move(m), ramp(staged.col(name)));
  }

  // 6. Calendar columns in the manifest's civil time zone.
  CalendarColumns cal = calendar_features(staged.index(), manifest.zone);
  auto cal_meta = [](const char* name) {
    ColumnMeta m;
    m.name = name;
    m.kind = ColumnKind::calendar;
    return m;
  };
  add_column(cal_meta("hour"), std::move(cal.hour));
  add_column(cal_meta("weekday"), std::move(cal.weekday));
  add_column(cal_meta("month"), std::move(cal.month));

  return staged.with_columns(std::move(new_meta), std::move(new_cols));
}

}  // namespace afrrcast
