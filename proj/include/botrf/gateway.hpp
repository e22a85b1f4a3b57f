#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "botrf/command.hpp"
#include "botrf/dem.hpp"
#include "botrf/linkbudget.hpp"
#include "botrf/profile.hpp"
#include "botrf/propagation.hpp"
#include "botrf/report.hpp"
#include "botrf/sitestore.hpp"

namespace botrf {

enum class ResponseKind { Text, Report, Chart, Error };

std::string_view response_kind_name(ResponseKind k) noexcept;  // "TEXT", ...

struct Response {
  ResponseKind kind = ResponseKind::Text;
  std::string body;
  std::optional<std::string> chart_id;  // set for CHART responses
  std::vector<std::string> diagnostics;
};

// A link endpoint: a stored site name or inline coordinates.
using Endpoint = std::variant<std::string, GeoPoint>;

struct LinkRequest {
  Endpoint tx;
  Endpoint rx;
  double tx_antenna_m = 10;
  double rx_antenna_m = 10;
  double frequency_mhz = 5800;
  double k_factor = kDefaultKFactor;
  LossModel model = LossModel::Itm;
};

struct LinkComputation {
  LinkGeometry geometry;
  TerrainProfile profile;
  PathLossResult loss;
  profile::ClearanceVerdict verdict;
};

struct BudgetComputation {
  Site tx;
  Site rx;
  double distance_km = 0;
  double frequency_mhz = 0;
  LinkBudget budget;
  std::vector<PowerSample> series;
};

struct GatewayOptions {
  double sample_spacing_m = kDefaultSpacingM;
  ItmParams itm;
  std::size_t chart_capacity = 256;
};

// Orchestrates the modules behind the command grammar. Commands from one
// owner run one at a time; different owners proceed concurrently.
class Gateway {
 public:
  Gateway(SiteStore& store, const ElevationModel* dem, GatewayOptions options = {});

  // Parses and dispatches; parse failures come back as ERROR responses.
  Response handle_line(std::string_view owner, std::string_view line);
  Response dispatch(const Command& c);

  // Structured entry points shared with the HTTP API. Throw botrf::Error.
  LinkComputation compute_link(std::string_view owner, const LinkRequest& req) const;
  Site resolve_site(std::string_view owner, std::string_view name) const;
  // Free-space budget between stored sites; the loss is FSPL at `frequency_mhz`
  // or, without it, the FSPL cached by the last calc/rep of the pair.
  BudgetComputation compute_budget(std::string_view owner, std::string_view tx, std::string_view rx,
                                   const RadioParams& radio, std::optional<double> frequency_mhz) const;

  std::string store_chart(std::string svg);
  std::optional<std::string> chart(std::string_view id) const;

  SiteStore& store() noexcept { return store_; }
  const ElevationModel* dem() const noexcept { return dem_; }

 private:
  std::shared_ptr<std::mutex> owner_mutex(const std::string& owner);

  Response do_site(const Command& c, const SiteArgs& a);
  Response do_calc(const Command& c, const LinkArgs& a);
  Response do_rep(const Command& c, const LinkArgs& a);
  Response do_pow(const Command& c, const PowArgs& a);
  Response do_cnv(const CnvArgs& a) const;
  Response do_list(const Command& c) const;

  LinkRequest complete_link(const std::string& owner, const LinkArgs& a) const;
  void remember(const std::string& owner, const LinkRequest& req, const LinkComputation& lc);

  SiteStore& store_;
  const ElevationModel* dem_;
  GatewayOptions options_;

  std::mutex owners_mutex_;
  std::map<std::string, std::shared_ptr<std::mutex>> owner_mutexes_;

  mutable std::mutex last_mutex_;
  std::map<std::string, std::pair<std::string, std::string>> last_pair_;  // owner -> latest (tx, rx)

  mutable std::mutex charts_mutex_;
  std::map<std::string, std::string> charts_;
  std::vector<std::string> chart_order_;
};

}  // namespace botrf
