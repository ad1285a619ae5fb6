#include "horizonkit/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

namespace horizonkit {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_real(std::string_view text, std::size_t line, const char* what) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty() || !std::isfinite(value)) {
    throw FormatError(std::string(what) + " is not a finite number: '" + std::string(text) + "'", line);
  }
  return value;
}

MaybeReal parse_maybe(std::string_view text, std::size_t line, const char* what) {
  if (text == "NA") return std::nullopt;
  return parse_real(text, line, what);
}

std::int64_t parse_int(std::string_view text, std::size_t line, const char* what) {
  std::int64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw FormatError(std::string(what) + " is not an integer: '" + std::string(text) + "'", line);
  }
  return value;
}

// Lines of a CSV file with its header checked; blank lines and `#`
// comments are skipped but still counted for error messages.
class CsvReader {
 public:
  CsvReader(const std::filesystem::path& path, std::string_view header) : in_(path) {
    if (!in_) throw IoError("cannot open " + path.string());
    std::vector<std::string_view> fields;
    if (!next(fields)) throw FormatError("missing header '" + std::string(header) + "'", 1);
    std::string joined;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) joined += ',';
      joined += fields[i];
    }
    if (joined != header) {
      throw FormatError("expected header '" + std::string(header) + "', got '" + joined + "'", line_);
    }
    columns_ = fields.size();
  }

  bool next(std::vector<std::string_view>& fields) {
    while (std::getline(in_, buffer_)) {
      ++line_;
      const auto content = trim(buffer_);
      if (content.empty()) continue;
      if (content.front() == '#') {
        comments_.emplace_back(content);
        continue;
      }
      fields = split(content);
      if (columns_ != 0 && fields.size() != columns_) {
        throw FormatError("expected " + std::to_string(columns_) + " fields, got " + std::to_string(fields.size()),
                          line_);
      }
      return true;
    }
    return false;
  }

  std::size_t line() const noexcept { return line_; }
  const std::vector<std::string>& comments() const noexcept { return comments_; }

 private:
  std::ifstream in_;
  std::string buffer_;
  std::size_t line_ = 0;
  std::size_t columns_ = 0;
  std::vector<std::string> comments_;
};

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

json maybe_json(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

}  // namespace

std::string format_real(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

std::string format_maybe(const MaybeReal& value) { return value ? format_real(*value) : "NA"; }

EnsembleForecast read_ensemble_csv(const std::filesystem::path& path, std::int64_t t0, const std::string& step) {
  CsvReader reader(path, "member,lead,value");
  std::map<std::pair<std::int64_t, std::int64_t>, double> cells;
  std::int64_t max_member = -1;
  std::int64_t max_lead = 0;
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    const auto member = parse_int(f[0], reader.line(), "member");
    const auto lead = parse_int(f[1], reader.line(), "lead");
    if (member < 0) throw FormatError("member index must be >= 0", reader.line());
    if (lead < 1) throw FormatError("lead must be >= 1", reader.line());
    const double value = parse_real(f[2], reader.line(), "value");
    if (!cells.emplace(std::pair{member, lead}, value).second) {
      throw FormatError("duplicate cell member " + std::to_string(member) + " lead " + std::to_string(lead),
                        reader.line());
    }
    max_member = std::max(max_member, member);
    max_lead = std::max(max_lead, lead);
  }
  if (cells.empty()) throw FormatError("ensemble file has no rows", 0);
  const auto members = static_cast<std::size_t>(max_member + 1);
  const auto leads = static_cast<std::size_t>(max_lead);
  if (cells.size() != members * leads) {
    for (std::int64_t m = 0; m <= max_member; ++m) {
      for (std::int64_t l = 1; l <= max_lead; ++l) {
        if (!cells.contains({m, l})) {
          throw FormatError("ragged ensemble: member " + std::to_string(m) + " lacks lead " + std::to_string(l), 0);
        }
      }
    }
  }
  std::vector<double> values;
  values.reserve(cells.size());
  for (const auto& [key, v] : cells) values.push_back(v);  // map order is member-major
  return EnsembleForecast(TimeAxis(t0, step, leads), members, std::move(values));
}

void write_ensemble_csv(const std::filesystem::path& path, const EnsembleForecast& ensemble) {
  auto out = open_for_write(path);
  out << "member,lead,value\n";
  for (std::size_t m = 0; m < ensemble.member_count(); ++m) {
    for (std::size_t i = 0; i < ensemble.lead_count(); ++i) {
      out << m << ',' << (i + 1) << ',' << format_real(ensemble.at(m, i)) << '\n';
    }
  }
  finish(out, path);
}

VerificationSeries read_series_csv(const std::filesystem::path& path, VerificationKind kind, std::int64_t t0,
                                   const std::string& step) {
  CsvReader reader(path, "lead,value");
  std::vector<MaybeReal> values;
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    const auto lead = parse_int(f[0], reader.line(), "lead");
    if (lead != static_cast<std::int64_t>(values.size()) + 1) {
      throw FormatError("expected lead " + std::to_string(values.size() + 1) + ", got " + std::to_string(lead),
                        reader.line());
    }
    values.push_back(parse_maybe(f[1], reader.line(), "value"));
  }
  if (values.empty()) throw FormatError("series file has no rows", 0);
  const std::size_t n = values.size();
  return VerificationSeries(TimeAxis(t0, step, n), std::move(values), kind);
}

void write_series_csv(const std::filesystem::path& path, std::span<const MaybeReal> values) {
  auto out = open_for_write(path);
  out << "lead,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) out << (i + 1) << ',' << format_maybe(values[i]) << '\n';
  finish(out, path);
}

GaussianClimatology read_climatology_csv(const std::filesystem::path& path) {
  std::ifstream probe(path);
  if (!probe) throw IoError("cannot open " + path.string());
  std::string first;
  std::getline(probe, first);
  const auto head = trim(first);
  constexpr std::string_view prefix = "# cycle_length=";
  if (!head.starts_with(prefix)) throw FormatError("expected '# cycle_length=<n>' comment", 1);
  const auto cycle = parse_int(trim(head.substr(prefix.size())), 1, "cycle_length");
  if (cycle < 1) throw FormatError("cycle_length must be >= 1", 1);

  CsvReader reader(path, "position,mean,std");
  std::vector<GaussianDistribution> positions;
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    const auto pos = parse_int(f[0], reader.line(), "position");
    if (pos != static_cast<std::int64_t>(positions.size())) {
      throw FormatError("expected position " + std::to_string(positions.size()), reader.line());
    }
    const double mean = parse_real(f[1], reader.line(), "mean");
    const double sd = parse_real(f[2], reader.line(), "std");
    if (!(sd > 0.0)) throw FormatError("std must be > 0", reader.line());
    positions.emplace_back(mean, sd);
  }
  if (positions.size() != static_cast<std::size_t>(cycle)) {
    throw FormatError("cycle_length " + std::to_string(cycle) + " but " + std::to_string(positions.size()) +
                          " positions",
                      0);
  }
  return GaussianClimatology(std::move(positions));
}

void write_climatology_csv(const std::filesystem::path& path, const GaussianClimatology& clim) {
  auto out = open_for_write(path);
  out << "# cycle_length=" << clim.cycle_length() << "\nposition,mean,std\n";
  const auto positions = clim.positions();
  for (std::size_t p = 0; p < positions.size(); ++p) {
    out << p << ',' << format_real(positions[p].mean()) << ',' << format_real(positions[p].std()) << '\n';
  }
  finish(out, path);
}

std::map<std::string, StandRecord> read_stands_csv(const std::filesystem::path& path) {
  CsvReader reader(path, "stand,group,lead,own_error,neighbor_lower_error,neighbor_upper_error");
  std::map<std::string, StandRecord> stands;
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    const std::string stand(f[0]);
    if (stand.empty()) throw FormatError("empty stand id", reader.line());
    auto& rec = stands[stand];
    if (rec.own.empty()) {
      rec.group = std::string(f[1]);
    } else if (rec.group != f[1]) {
      throw FormatError("stand '" + stand + "' changes group", reader.line());
    }
    const auto lead = parse_int(f[2], reader.line(), "lead");
    if (lead != static_cast<std::int64_t>(rec.own.size()) + 1) {
      throw FormatError("stand '" + stand + "': expected lead " + std::to_string(rec.own.size() + 1), reader.line());
    }
    rec.own.push_back(parse_maybe(f[3], reader.line(), "own_error"));
    rec.lower.push_back(parse_maybe(f[4], reader.line(), "neighbor_lower_error"));
    rec.upper.push_back(parse_maybe(f[5], reader.line(), "neighbor_upper_error"));
  }
  if (stands.empty()) throw FormatError("stand file has no rows", 0);
  return stands;
}

json tolerance_to_json(const ToleranceSpec& tol) {
  json j;
  j["direction"] = std::string(to_string(tol.direction()));
  auto lead_array = [](const ToleranceSpec::PerLead& series) {
    json arr = json::array();
    for (double v : series) arr.push_back(maybe_json(v));
    return arr;
  };
  if (const auto* rho = std::get_if<double>(&tol.value())) {
    j["type"] = "scalar";
    j["rho"] = *rho;
  } else if (const auto* series = std::get_if<ToleranceSpec::PerLead>(&tol.value())) {
    j["type"] = "per_lead";
    j["rho"] = lead_array(*series);
  } else {
    j["type"] = "grouped";
    json groups = json::object();
    for (const auto& [key, series] : std::get<ToleranceSpec::Grouped>(tol.value())) groups[key] = lead_array(series);
    j["rho"] = groups;
  }
  return j;
}

json limit_to_json(const LimitResult& limit) {
  json j;
  j["status"] = std::string(to_string(limit.status));
  j["max_lead"] = limit.max_lead;
  if (limit.status != LimitStatus::NotReached) {
    j["lead"] = limit.lead;
    j["time"] = limit.absolute_time;
  }
  j["kind"] = std::string(to_string(limit.kind));
  j["score"] = std::string(to_string(limit.score_name));
  j["tolerance"] = tolerance_to_json(limit.tolerance);
  json intervals = json::array();
  for (const auto& iv : limit.acceptable_intervals) intervals.push_back({iv.first, iv.last});
  j["acceptable_intervals"] = intervals;
  return j;
}

json distribution_to_json(const LimitDistribution& dist, bool include_members) {
  json j;
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  j["mean"] = opt(dist.mean);
  j["std"] = opt(dist.stddev);
  j["median"] = opt(dist.median);
  j["q25"] = opt(dist.q25);
  j["q75"] = opt(dist.q75);
  j["not_reached_count"] = dist.not_reached_count;
  j["never_acceptable_count"] = dist.never_acceptable_count;
  j["count"] = dist.per_member_limits.size();
  if (include_members) {
    json members = json::array();
    for (const auto& limit : dist.per_member_limits) members.push_back(limit_to_json(limit));
    j["limits"] = members;
  }
  return j;
}

NamedColumn column_of(std::string label, const ScoreSeries& series) {
  return {std::move(label), std::vector<MaybeReal>(series.values().begin(), series.values().end())};
}

json Manifest::to_json() const {
  json j;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  j["files"] = files;
  j["omitted"] = omitted;
  return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  auto out = open_for_write(path);
  out << content;
  finish(out, path);
}

Manifest write_results(const std::filesystem::path& dir, const ResultSet& results, const std::string& config_hash,
                       std::uint64_t seed) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  Manifest manifest{config_hash, seed, {}, {}};

  if (!results.scores.empty()) {
    const std::size_t leads = results.scores.front().values.size();
    std::ostringstream csv;
    csv << "lead";
    for (const auto& s : results.scores) {
      if (s.values.size() != leads) throw AxisError("scores.csv: series differ in length");
      csv << ',' << s.label;
    }
    csv << '\n';
    for (std::size_t i = 0; i < leads; ++i) {
      csv << (i + 1);
      for (const auto& s : results.scores) csv << ',' << format_maybe(s.values[i]);
      csv << '\n';
    }
    write_text_file(dir / "scores.csv", csv.str());
    manifest.files.emplace_back("scores.csv");
  } else {
    manifest.omitted.emplace_back("scores.csv");
  }

  json limits = json::array();
  for (const auto& l : results.limits) {
    json j = limit_to_json(l.limit);
    j["label"] = l.label;
    limits.push_back(std::move(j));
  }
  write_text_file(dir / "limits.json", limits.dump(2) + "\n");
  manifest.files.emplace_back("limits.json");

  if (!results.heatmap.empty()) {
    std::ostringstream csv;
    csv << "init_time,lead,value\n";
    for (const auto& cell : results.heatmap) {
      csv << cell.init_time << ',' << cell.lead << ',' << format_maybe(cell.value) << '\n';
    }
    write_text_file(dir / "heatmap.csv", csv.str());
    manifest.files.emplace_back("heatmap.csv");
  } else {
    manifest.omitted.emplace_back("heatmap.csv");
  }

  for (const auto& [name, doc] : results.documents) {
    write_text_file(dir / (name + ".json"), doc.dump(2) + "\n");
    manifest.files.push_back(name + ".json");
  }
  for (const auto& [name, content] : results.tables) {
    write_text_file(dir / name, content);
    manifest.files.push_back(name);
  }

  write_text_file(dir / "manifest.json", manifest.to_json().dump(2) + "\n");
  return manifest;
}

}  // namespace horizonkit
