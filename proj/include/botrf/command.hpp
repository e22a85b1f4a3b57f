#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "botrf/errors.hpp"
#include "botrf/linkbudget.hpp"
#include "botrf/propagation.hpp"
#include "botrf/units.hpp"

namespace botrf {

enum class Verb { Site, Calc, Rep, Pow, Cnv, List, Help };

std::string_view verb_name(Verb v) noexcept;
std::optional<Verb> parse_verb(std::string_view text) noexcept;

struct SiteArgs {
  std::string name;
  double lat_deg = 0;
  double lon_deg = 0;
};

// calc needs everything; rep may leave the link unspecified (last calc) or
// name only the sites (last parameters used for that pair).
struct LinkArgs {
  std::string tx;
  std::string rx;
  std::optional<double> tx_antenna_m;
  std::optional<double> rx_antenna_m;
  std::optional<double> frequency_mhz;
  std::optional<double> k_factor;
  std::optional<LossModel> model;
};

struct PowArgs {
  std::string tx;
  std::string rx;
  RadioParams radio;
  std::optional<double> frequency_mhz;
};

struct CnvArgs {
  double value = 0;
  units::Unit from = units::Unit::mW;
  std::optional<units::Unit> to;
  std::optional<double> frequency_mhz;
};

struct HelpArgs {
  std::optional<Verb> topic;
};

struct NoArgs {};

struct Command {
  Verb verb = Verb::Help;
  std::variant<NoArgs, SiteArgs, LinkArgs, PowArgs, CnvArgs, HelpArgs> args;
  std::string owner;
};

class CommandError : public ValidationError {
 public:
  enum class Kind { Empty, UnknownVerb, Arity, BadArgument };
  CommandError(Kind kind, std::string message) : ValidationError(std::move(message)), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

// One line per verb: the grammar followed by " -- " and a short description.
std::string render_usage(Verb v);
std::string render_help();

// Throws CommandError.
Command parse_command(std::string_view line, std::string_view owner = "local");

}  // namespace botrf
