#include "afrrcast/gbt/daily_profile.hpp"

#include <fstream>

#include "afrrcast/errors.hpp"
#include "afrrcast/timetable.hpp"
#include "afrrcast/util/quantile.hpp"

namespace afrrcast {

int DailyProfileModel::slot_of(UnixSeconds t) const {
  const UnixSeconds local = t + static_cast<UnixSeconds>(zone.offset_minutes_at(t)) * 60;
  std::int64_t sec = local % 86400;
  if (sec < 0) sec += 86400;
  return static_cast<int>(sec / kSlotSeconds);
}

double DailyProfileModel::predict_at(UnixSeconds t) const {
  return slots[static_cast<std::size_t>(slot_of(t))];
}

std::vector<double> DailyProfileModel::predict(std::span<const UnixSeconds> index) const {
  std::vector<double> out;
  out.reserve(index.size());
  for (UnixSeconds t : index) out.push_back(predict_at(t));
  return out;
}

DailyProfileModel daily_profile(std::span<const double> y, std::span<const UnixSeconds> index,
                                ProfileMode mode, double q, const TimeZoneRule& zone) {
  if (y.size() != index.size()) throw DataError("daily_profile: length mismatch");
  DailyProfileModel model;
  model.mode = mode;
  model.q = q;
  model.zone = zone;
  std::vector<std::vector<double>> per_slot(kSlotsPerDay);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (is_missing(y[i])) continue;
    per_slot[static_cast<std::size_t>(model.slot_of(index[i]))].push_back(y[i]);
  }
  model.slots.resize(kSlotsPerDay);
  for (int s = 0; s < kSlotsPerDay; ++s) {
    auto& values = per_slot[static_cast<std::size_t>(s)];
    if (values.empty())
      throw DataError("daily_profile: no observations for slot " + std::to_string(s));
    model.slots[static_cast<std::size_t>(s)] =
        mode == ProfileMode::mean ? mean(values) : quantile_linear(values, q);
  }
  return model;
}

nlohmann::json DailyProfileModel::to_json() const {
  nlohmann::json j;
  j["format"] = "afrrcast.model";
  j["version"] = 1;
  j["model_type"] = "daily_profile";
  j["mode"] = mode == ProfileMode::mean ? "mean" : "quantile";
  j["q"] = q;
  j["slots"] = slots;
  nlohmann::json zj;
  zj["standard_offset_minutes"] = zone.standard_offset_minutes;
  zj["eu_dst"] = zone.eu_dst;
  j["zone"] = std::move(zj);
  return j;
}

DailyProfileModel DailyProfileModel::from_json(const nlohmann::json& j) {
  if (j.value("format", std::string{}) != "afrrcast.model" ||
      j.value("model_type", std::string{}) != "daily_profile")
    throw DataError("not a daily_profile model file");
  DailyProfileModel m;
  m.mode = j.value("mode", std::string{"mean"}) == "quantile" ? ProfileMode::quantile
                                                              : ProfileMode::mean;
  m.q = j.value("q", 0.9);
  m.slots = j.at("slots").get<std::vector<double>>();
  if (m.slots.size() != kSlotsPerDay)
    throw DataError("daily_profile model must have 96 slots");
  if (j.contains("zone")) {
    m.zone.standard_offset_minutes = j.at("zone").value("standard_offset_minutes", 60);
    m.zone.eu_dst = j.at("zone").value("eu_dst", true);
  }
  return m;
}

void DailyProfileModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write model: " + path.string());
  out << to_json().dump(1) << '\n';
}

DailyProfileModel DailyProfileModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model: " + path.string());
  nlohmann::json j;
  in >> j;
  return from_json(j);
}

}  // namespace afrrcast
