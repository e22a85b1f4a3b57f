#include "botrf/sitestore.hpp"

#include <chrono>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "botrf/errors.hpp"

namespace botrf {

namespace fs = std::filesystem;

bool is_valid_site_name(std::string_view name) noexcept {
  if (name.empty() || name.size() > 32) return false;
  for (char c : name) {
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const hh_mm_ss hms{t - day};
  return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}Z", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), hms.hours().count(),
                     hms.minutes().count(), hms.seconds().count());
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' ||
      text[16] != ':' || text[19] != 'Z')
    return std::nullopt;
  auto num = [&](std::size_t pos, std::size_t len, int& out) {
    auto [p, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
    return ec == std::errc{} && p == text.data() + pos + len;
  };
  int y, mo, d, h, mi, s;
  if (!num(0, 4, y) || !num(5, 2, mo) || !num(8, 2, d) || !num(11, 2, h) || !num(14, 2, mi) || !num(17, 2, s))
    return std::nullopt;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 59) return std::nullopt;
  return Timestamp{sys_days{ymd}} + hours{h} + minutes{mi} + seconds{s};
}

namespace {

bool valid_owner(std::string_view owner) {
  return !owner.empty() && owner.size() <= 128 && owner.find_first_of("\t\r\n") == std::string_view::npos;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::optional<double> parse_double(std::string_view s) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

template <typename F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t start = 0;
  std::size_t lineno = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    f(++lineno, line);
    start = end + 1;
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(fmt::format("cannot write {}", tmp.string()));
    out << content;
    out.flush();
    if (!out) throw Error(fmt::format("cannot write {}", tmp.string()));
  }
  fs::rename(tmp, path);
}

}  // namespace

SiteStore::SiteStore(std::optional<fs::path> data_dir, const ElevationModel* dem)
    : data_dir_(std::move(data_dir)), dem_(dem) {
  if (data_dir_) {
    fs::create_directories(*data_dir_);
    restore(*data_dir_);
  }
}

std::optional<double> SiteStore::resolve_elevation(const GeoPoint& p) const {
  if (!dem_) return std::nullopt;
  try {
    return dem_->elevation_at(p);
  } catch (const MissingDataError& e) {
    spdlog::warn("{}; elevation stored as unknown", e.what());
  } catch (const VoidDataError& e) {
    spdlog::warn("{}; elevation stored as unknown", e.what());
  }
  return std::nullopt;
}

Site SiteStore::put_site(std::string_view owner, std::string_view name, const GeoPoint& point) {
  if (!valid_owner(owner)) throw ValidationError("owner id must be 1-128 characters without tabs or newlines");
  if (!is_valid_site_name(name))
    throw ValidationError(fmt::format("invalid site name '{}': use 1-32 letters, digits or '_'", name));
  const GeoPoint pt = geodesy::make_point(point.lat_deg, point.lon_deg);

  Site s{std::string(owner), std::string(name), pt, resolve_elevation(pt),
         std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now())};
  std::unique_lock lock(mutex_);
  sites_[{s.owner, s.name}] = s;
  persist_locked();
  return s;
}

void SiteStore::put_record(const Site& site) {
  if (!valid_owner(site.owner) || !is_valid_site_name(site.name) || !geodesy::is_valid(site.point))
    throw ValidationError("invalid site record");
  std::unique_lock lock(mutex_);
  sites_[{site.owner, site.name}] = site;
  persist_locked();
}

std::optional<Site> SiteStore::get_site(std::string_view owner, std::string_view name) const {
  std::shared_lock lock(mutex_);
  auto it = sites_.find({std::string(owner), std::string(name)});
  if (it == sites_.end()) return std::nullopt;
  return it->second;
}

std::vector<Site> SiteStore::list_sites(std::string_view owner) const {
  std::shared_lock lock(mutex_);
  std::vector<Site> out;
  const std::string o(owner);
  for (auto it = sites_.lower_bound({o, std::string()}); it != sites_.end() && it->first.first == o; ++it)
    out.push_back(it->second);
  return out;
}

std::size_t SiteStore::size() const {
  std::shared_lock lock(mutex_);
  return sites_.size();
}

std::size_t SiteStore::refresh_elevations() {
  std::unique_lock lock(mutex_);
  std::size_t changed = 0;
  for (auto& [key, s] : sites_) {
    auto e = resolve_elevation(s.point);
    if (e && e != s.ground_elevation_m) {
      s.ground_elevation_m = e;
      ++changed;
    }
  }
  if (changed) persist_locked();
  return changed;
}

void SiteStore::put_result(const StoredResult& r) {
  if (!valid_owner(r.owner) || !is_valid_site_name(r.tx) || !is_valid_site_name(r.rx))
    throw ValidationError("invalid result record");
  std::unique_lock lock(mutex_);
  results_[{r.owner, r.tx, r.rx}] = r;
  persist_locked();
}

std::optional<StoredResult> SiteStore::last_result(std::string_view owner, std::string_view tx,
                                                   std::string_view rx) const {
  std::shared_lock lock(mutex_);
  auto it = results_.find({std::string(owner), std::string(tx), std::string(rx)});
  if (it == results_.end()) return std::nullopt;
  return it->second;
}

std::vector<Site> SiteStore::all_sites() const {
  std::shared_lock lock(mutex_);
  std::vector<Site> out;
  out.reserve(sites_.size());
  for (const auto& [k, s] : sites_) out.push_back(s);
  return out;
}

std::vector<StoredResult> SiteStore::all_results() const {
  std::shared_lock lock(mutex_);
  std::vector<StoredResult> out;
  for (const auto& [k, r] : results_) out.push_back(r);
  return out;
}

std::string SiteStore::serialize_sites(const std::vector<Site>& sites) {
  std::string out(kSitesHeader);
  out += '\n';
  for (const auto& s : sites) {
    out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\n", s.owner, s.name, s.point.lat_deg, s.point.lon_deg,
                       s.ground_elevation_m ? fmt::format("{}", *s.ground_elevation_m) : std::string("?"),
                       format_timestamp(s.created_at));
  }
  return out;
}

std::vector<Site> SiteStore::parse_sites(std::string_view text, std::size_t* skipped) {
  std::vector<Site> out;
  std::size_t bad = 0;
  for_each_line(text, [&](std::size_t lineno, std::string_view line) {
    if (line.empty()) return;
    if (lineno == 1 && line.starts_with('#')) {
      if (line != kSitesHeader) spdlog::warn("sites file: unexpected header '{}'", line);
      return;
    }
    auto f = split_tabs(line);
    std::optional<double> lat, lon, elev;
    std::optional<Timestamp> ts;
    bool ok = f.size() == 6 && valid_owner(f[0]) && is_valid_site_name(f[1]);
    if (ok) {
      lat = parse_double(f[2]);
      lon = parse_double(f[3]);
      ts = parse_timestamp(f[5]);
      if (f[4] != "?") {
        elev = parse_double(f[4]);
        ok = elev.has_value();
      }
      ok = ok && lat && lon && ts && geodesy::is_valid(GeoPoint{*lat, *lon});
    }
    if (!ok) {
      ++bad;
      spdlog::warn("sites file line {}: corrupt record skipped", lineno);
      return;
    }
    out.push_back(Site{std::string(f[0]), std::string(f[1]), GeoPoint{*lat, *lon}, elev, *ts});
  });
  if (skipped) *skipped = bad;
  return out;
}

std::string SiteStore::serialize_results(const std::vector<StoredResult>& results) {
  std::string out(kResultsHeader);
  out += '\n';
  for (const auto& r : results) {
    out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n", r.owner, r.tx, r.rx, model_name(r.model),
                       r.frequency_mhz, r.k_factor, r.tx_antenna_m, r.rx_antenna_m, r.fspl_db, r.model_loss_db,
                       format_timestamp(r.computed_at));
  }
  return out;
}

std::vector<StoredResult> SiteStore::parse_results(std::string_view text, std::size_t* skipped) {
  std::vector<StoredResult> out;
  std::size_t bad = 0;
  for_each_line(text, [&](std::size_t lineno, std::string_view line) {
    if (line.empty()) return;
    if (lineno == 1 && line.starts_with('#')) {
      if (line != kResultsHeader) spdlog::warn("results file: unexpected header '{}'", line);
      return;
    }
    auto f = split_tabs(line);
    bool ok = f.size() == 11 && valid_owner(f[0]) && is_valid_site_name(f[1]) && is_valid_site_name(f[2]);
    StoredResult r;
    if (ok) {
      auto model = parse_model(f[3]);
      std::optional<double> nums[6];
      for (int i = 0; i < 6; ++i) nums[i] = parse_double(f[4 + i]);
      auto ts = parse_timestamp(f[10]);
      ok = model && ts;
      for (auto& n : nums) ok = ok && n.has_value();
      if (ok)
        r = StoredResult{std::string(f[0]), std::string(f[1]), std::string(f[2]), *model, *nums[0], *nums[1],
                         *nums[2], *nums[3], *nums[4], *nums[5], *ts};
    }
    if (!ok) {
      ++bad;
      spdlog::warn("results file line {}: corrupt record skipped", lineno);
      return;
    }
    out.push_back(std::move(r));
  });
  if (skipped) *skipped = bad;
  return out;
}

void SiteStore::persist(const fs::path& dir) const {
  std::shared_lock lock(mutex_);
  std::vector<Site> sites;
  for (const auto& [k, s] : sites_) sites.push_back(s);
  std::vector<StoredResult> results;
  for (const auto& [k, r] : results_) results.push_back(r);
  fs::create_directories(dir);
  write_atomic(dir / "sites.tsv", serialize_sites(sites));
  write_atomic(dir / "results.tsv", serialize_results(results));
}

void SiteStore::persist_locked() const {
  if (!data_dir_) return;
  std::vector<Site> sites;
  for (const auto& [k, s] : sites_) sites.push_back(s);
  std::vector<StoredResult> results;
  for (const auto& [k, r] : results_) results.push_back(r);
  write_atomic(*data_dir_ / "sites.tsv", serialize_sites(sites));
  write_atomic(*data_dir_ / "results.tsv", serialize_results(results));
}

std::size_t SiteStore::restore(const fs::path& dir) {
  std::size_t bad_sites = 0, bad_results = 0;
  std::vector<Site> sites;
  std::vector<StoredResult> results;
  if (fs::exists(dir / "sites.tsv")) sites = parse_sites(read_file(dir / "sites.tsv"), &bad_sites);
  if (fs::exists(dir / "results.tsv")) results = parse_results(read_file(dir / "results.tsv"), &bad_results);
  std::unique_lock lock(mutex_);
  sites_.clear();
  results_.clear();
  for (auto& s : sites) sites_[{s.owner, s.name}] = std::move(s);
  for (auto& r : results) results_[{r.owner, r.tx, r.rx}] = std::move(r);
  return bad_sites + bad_results;
}

}  // namespace botrf
