#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "botrf/dem.hpp"
#include "botrf/propagation.hpp"
#include "botrf/site.hpp"

namespace botrf {

std::string format_timestamp(Timestamp t);                 // 2024-05-01T12:00:00Z
std::optional<Timestamp> parse_timestamp(std::string_view text);

// Latest loss computed for an owner's (tx, rx) pair.
struct StoredResult {
  std::string owner;
  std::string tx;
  std::string rx;
  LossModel model = LossModel::Itm;
  double frequency_mhz = 0;
  double k_factor = 0;
  double tx_antenna_m = 0;
  double rx_antenna_m = 0;
  double fspl_db = 0;
  double model_loss_db = 0;
  Timestamp computed_at{};

  friend bool operator==(const StoredResult&, const StoredResult&) = default;
};

// Per-owner sites and latest results. With a data directory every write is
// persisted to sites.tsv / results.tsv via temp file + rename.
class SiteStore {
 public:
  static constexpr std::string_view kSitesHeader = "#botrf-sites v1";
  static constexpr std::string_view kResultsHeader = "#botrf-results v1";

  explicit SiteStore(std::optional<std::filesystem::path> data_dir = std::nullopt,
                     const ElevationModel* dem = nullptr);

  // Throws ValidationError for a bad owner, name or point.
  Site put_site(std::string_view owner, std::string_view name, const GeoPoint& point);
  // Stores the record as given (restore path, tests).
  void put_record(const Site& site);
  std::optional<Site> get_site(std::string_view owner, std::string_view name) const;
  std::vector<Site> list_sites(std::string_view owner) const;
  std::size_t size() const;

  // Re-resolves every site's elevation from the DEM; returns how many changed.
  std::size_t refresh_elevations();

  void put_result(const StoredResult& r);
  std::optional<StoredResult> last_result(std::string_view owner, std::string_view tx, std::string_view rx) const;

  // Whole-store snapshot, ordered by (owner, name).
  std::vector<Site> all_sites() const;
  std::vector<StoredResult> all_results() const;

  void persist(const std::filesystem::path& dir) const;
  // Replaces the contents with what the directory holds; corrupt lines are
  // skipped with a warning. Returns the number of skipped lines.
  std::size_t restore(const std::filesystem::path& dir);

  static std::string serialize_sites(const std::vector<Site>& sites);
  static std::vector<Site> parse_sites(std::string_view text, std::size_t* skipped = nullptr);
  static std::string serialize_results(const std::vector<StoredResult>& results);
  static std::vector<StoredResult> parse_results(std::string_view text, std::size_t* skipped = nullptr);

  const std::optional<std::filesystem::path>& data_dir() const noexcept { return data_dir_; }

 private:
  using Key = std::pair<std::string, std::string>;
  using ResultKey = std::tuple<std::string, std::string, std::string>;

  std::optional<double> resolve_elevation(const GeoPoint& p) const;
  void persist_locked() const;

  std::optional<std::filesystem::path> data_dir_;
  const ElevationModel* dem_;
  mutable std::shared_mutex mutex_;
  std::map<Key, Site> sites_;
  std::map<ResultKey, StoredResult> results_;
};

}  // namespace botrf
