#pragma once

// JSON-lines trace format. Line 1 is a header object
//   {"T":..., "seed":..., "schedule_digest":"<hex>", "eps":[...]}
// followed by one object per step
//   {"t":..., "v":..., "p":..., "sold":0|1[, "lo", "hi", "asserted", "eps_hat", "role"]}
// Reals are written with 17 significant digits so a round trip is exact.

#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "json.hpp"

#include "driftprice/core.hpp"
#include "driftprice/random.hpp"

namespace driftprice {

inline std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string schedule_digest(const RateSchedule& schedule) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (double e : schedule.rates()) {
    char bytes[sizeof(double)];
    std::memcpy(bytes, &e, sizeof bytes);
    h = fnv1a64(std::string_view(bytes, sizeof bytes), h);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline void write_trace_jsonl(std::ostream& out, const EpisodeTrace& trace) {
  out << "{\"T\":" << trace.horizon().steps() << ",\"seed\":" << trace.seed() << ",\"schedule_digest\":\""
      << schedule_digest(trace.schedule()) << "\",\"eps\":[";
  bool first = true;
  for (double e : trace.schedule().rates()) {
    if (!first) out << ',';
    first = false;
    out << format_real(e);
  }
  out << "]}\n";
  for (const StepRecord& s : trace.steps()) {
    out << "{\"t\":" << s.t << ",\"v\":" << format_real(s.value) << ",\"p\":" << format_real(s.price)
        << ",\"sold\":" << (s.sold ? 1 : 0);
    if (s.note) {
      out << ",\"lo\":" << format_real(s.note->interval.lo()) << ",\"hi\":" << format_real(s.note->interval.hi())
          << ",\"asserted\":" << (s.note->asserted ? "true" : "false");
      if (s.note->eps_hat) out << ",\"eps_hat\":" << format_real(*s.note->eps_hat);
      out << ",\"role\":\"" << to_string(s.note->role) << '"';
    }
    out << "}\n";
  }
}

inline EpisodeTrace read_trace_jsonl(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trace: missing header line");
  const auto header = nlohmann::json::parse(line);
  const auto T = header.at("T").get<std::int64_t>();
  const auto seed = header.at("seed").get<std::uint64_t>();
  RateSchedule schedule(header.at("eps").get<std::vector<double>>());
  if (header.contains("schedule_digest") && header["schedule_digest"].get<std::string>() != schedule_digest(schedule)) {
    throw std::runtime_error("trace: schedule digest mismatch");
  }
  std::vector<StepRecord> steps;
  steps.reserve(static_cast<std::size_t>(T));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    StepRecord s;
    s.t = j.at("t").get<std::int64_t>();
    s.value = j.at("v").get<double>();
    s.price = j.at("p").get<double>();
    s.sold = j.at("sold").get<int>() != 0;
    if (j.contains("lo")) {
      StepAnnotation note;
      note.interval = Interval(j.at("lo").get<double>(), j.at("hi").get<double>());
      note.asserted = j.value("asserted", false);
      if (j.contains("eps_hat")) note.eps_hat = j["eps_hat"].get<double>();
      note.role = price_role_from_string(j.value("role", std::string("bisect")));
      s.note = note;
    }
    steps.push_back(std::move(s));
  }
  return EpisodeTrace(Horizon(T), std::move(schedule), std::move(steps), seed);
}

inline void save_trace(const std::string& path, const EpisodeTrace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file '" + path + "'");
  write_trace_jsonl(out, trace);
}

inline EpisodeTrace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file '" + path + "'");
  return read_trace_jsonl(in);
}

}  // namespace driftprice
