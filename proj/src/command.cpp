#include "botrf/command.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <vector>

#include <fmt/format.h>

namespace botrf {

namespace {

constexpr std::array kVerbs = {Verb::Site, Verb::Calc, Verb::Rep, Verb::Pow, Verb::Cnv, Verb::List, Verb::Help};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

struct Options {
  std::optional<std::string_view> k, model, f;
};

bool is_option(std::string_view tok) {
  const auto eq = tok.find('=');
  return eq != std::string_view::npos && eq > 0 && std::isalpha(static_cast<unsigned char>(tok[0]));
}

std::string names_list(const std::vector<std::string_view>& allowed) {
  std::string out;
  for (auto a : allowed) {
    if (!out.empty()) out += ", ";
    out += a;
  }
  return out;
}

Options take_options(Verb verb, std::vector<std::string_view>& toks, const std::vector<std::string_view>& allowed) {
  Options o;
  std::vector<std::string_view> positional;
  for (auto t : toks) {
    if (!is_option(t)) {
      positional.push_back(t);
      continue;
    }
    const auto eq = t.find('=');
    const std::string key = lower(t.substr(0, eq));
    const auto value = t.substr(eq + 1);
    bool known = false;
    for (auto a : allowed) known = known || a == key;
    if (!known) {
      throw CommandError(CommandError::Kind::BadArgument,
                         allowed.empty()
                             ? fmt::format("{} takes no options\nusage: {}", verb_name(verb), render_usage(verb))
                             : fmt::format("unknown option '{}' (allowed: {})\nusage: {}", key, names_list(allowed),
                                           render_usage(verb)));
    }
    if (key == "k") o.k = value;
    else if (key == "model") o.model = value;
    else if (key == "f") o.f = value;
  }
  toks = std::move(positional);
  return o;
}

[[noreturn]] void arity(Verb v) {
  throw CommandError(CommandError::Kind::Arity,
                     fmt::format("wrong number of arguments for {}\nusage: {}", verb_name(v), render_usage(v)));
}

double number(Verb v, std::string_view what, std::string_view tok) {
  std::string_view s = tok;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(value) ||
      (!s.empty() && s.front() == '+')) {
    throw CommandError(CommandError::Kind::BadArgument,
                       fmt::format("{} must be a number, got '{}'\nusage: {}", what, tok, render_usage(v)));
  }
  return value;
}

std::string site_name(Verb v, std::string_view what, std::string_view tok) {
  if (!is_valid_site_name(tok)) {
    throw CommandError(CommandError::Kind::BadArgument,
                       fmt::format("{} '{}' is not a valid site name (1-32 letters, digits or '_')\nusage: {}", what,
                                   tok, render_usage(v)));
  }
  return std::string(tok);
}

void apply_link_options(Verb v, const Options& o, LinkArgs& a) {
  if (o.k) a.k_factor = number(v, "k", *o.k);
  if (o.model) {
    a.model = parse_model(lower(*o.model));
    if (!a.model || *a.model == LossModel::Fspl)
      throw CommandError(CommandError::Kind::BadArgument,
                         fmt::format("model must be itm or ke, got '{}'\nusage: {}", *o.model, render_usage(v)));
  }
}

}  // namespace

std::string_view verb_name(Verb v) noexcept {
  switch (v) {
    case Verb::Site: return "site";
    case Verb::Calc: return "calc";
    case Verb::Rep: return "rep";
    case Verb::Pow: return "pow";
    case Verb::Cnv: return "cnv";
    case Verb::List: return "list";
    case Verb::Help: return "help";
  }
  return "";
}

std::optional<Verb> parse_verb(std::string_view text) noexcept {
  std::string t;
  for (char c : text) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (!t.empty() && t.front() == '/') t.erase(0, 1);  // chat clients prefix commands with '/'
  for (auto v : kVerbs)
    if (verb_name(v) == t) return v;
  return std::nullopt;
}

std::string render_usage(Verb v) {
  switch (v) {
    case Verb::Site: return "site <name> <lat> <lon> -- store a site (decimal degrees, south and west negative)";
    case Verb::Calc:
      return "calc <tx> <rx> <tx_h> <rx_h> <f_mhz> [k=<K>] [model=itm|ke] -- terrain profile chart and clearance";
    case Verb::Rep: return "rep [<tx> <rx> [<tx_h> <rx_h> <f_mhz>]] [k=<K>] [model=itm|ke] -- full link report";
    case Verb::Pow:
      return "pow <tx> <rx> <ptx_dbm> <tx_cable_db> <tx_gain_dbi> <rx_gain_dbi> <rx_cable_db> <sens_dbm> "
             "[f=<MHz>] -- link budget and power chart";
    case Verb::Cnv: return "cnv <value> <unit> [<unit>] [f=<MHz>] -- convert mW, dBm, dBuV/m, MHz, m";
    case Verb::List: return "list -- show your stored sites";
    case Verb::Help: return "help [<verb>] -- this text";
  }
  return "";
}

std::string render_help() {
  std::string out = "commands:\n";
  for (auto v : kVerbs) out += fmt::format("  {}\n", render_usage(v));
  return out;
}

Command parse_command(std::string_view line, std::string_view owner) {
  auto toks = tokenize(line);
  if (toks.empty()) throw CommandError(CommandError::Kind::Empty, "empty command\n" + render_help());
  const auto verb = parse_verb(toks.front());
  if (!verb) {
    std::string verbs;
    for (auto v : kVerbs) verbs += fmt::format("{}{}", verbs.empty() ? "" : ", ", verb_name(v));
    throw CommandError(CommandError::Kind::UnknownVerb,
                       fmt::format("unknown command '{}'; available: {}", toks.front(), verbs));
  }
  toks.erase(toks.begin());
  const Verb v = *verb;
  Command c{v, NoArgs{}, std::string(owner)};

  switch (v) {
    case Verb::Site: {
      take_options(v, toks, {});
      if (toks.size() != 3) arity(v);
      c.args = SiteArgs{site_name(v, "name", toks[0]), number(v, "lat", toks[1]), number(v, "lon", toks[2])};
      break;
    }
    case Verb::Calc:
    case Verb::Rep: {
      const auto o = take_options(v, toks, {"k", "model"});
      LinkArgs a;
      if (v == Verb::Calc && toks.size() != 5) arity(v);
      if (v == Verb::Rep && toks.size() != 0 && toks.size() != 2 && toks.size() != 5) arity(v);
      if (toks.size() >= 2) {
        a.tx = site_name(v, "tx", toks[0]);
        a.rx = site_name(v, "rx", toks[1]);
      }
      if (toks.size() == 5) {
        a.tx_antenna_m = number(v, "tx_h", toks[2]);
        a.rx_antenna_m = number(v, "rx_h", toks[3]);
        a.frequency_mhz = number(v, "f_mhz", toks[4]);
      }
      apply_link_options(v, o, a);
      c.args = std::move(a);
      break;
    }
    case Verb::Pow: {
      const auto o = take_options(v, toks, {"f"});
      if (toks.size() != 8) arity(v);
      PowArgs a;
      a.tx = site_name(v, "tx", toks[0]);
      a.rx = site_name(v, "rx", toks[1]);
      a.radio.tx_power_dbm = number(v, "ptx_dbm", toks[2]);
      a.radio.tx_cable_loss_db = number(v, "tx_cable_db", toks[3]);
      a.radio.tx_antenna_gain_dbi = number(v, "tx_gain_dbi", toks[4]);
      a.radio.rx_antenna_gain_dbi = number(v, "rx_gain_dbi", toks[5]);
      a.radio.rx_cable_loss_db = number(v, "rx_cable_db", toks[6]);
      a.radio.rx_sensitivity_dbm = number(v, "sens_dbm", toks[7]);
      if (o.f) a.frequency_mhz = number(v, "f", *o.f);
      c.args = std::move(a);
      break;
    }
    case Verb::Cnv: {
      const auto o = take_options(v, toks, {"f"});
      if (toks.size() != 2 && toks.size() != 3) arity(v);
      CnvArgs a;
      a.value = number(v, "value", toks[0]);
      auto unit = [&](std::string_view t) {
        auto u = units::parse_unit(t);
        if (!u)
          throw CommandError(CommandError::Kind::BadArgument,
                             fmt::format("unknown unit '{}' (mW, dBm, dBuV/m, MHz, m)\nusage: {}", t, render_usage(v)));
        return *u;
      };
      a.from = unit(toks[1]);
      if (toks.size() == 3) a.to = unit(toks[2]);
      if (o.f) a.frequency_mhz = number(v, "f", *o.f);
      c.args = a;
      break;
    }
    case Verb::List: {
      take_options(v, toks, {});
      if (!toks.empty()) arity(v);
      break;
    }
    case Verb::Help: {
      take_options(v, toks, {});
      if (toks.size() > 1) arity(v);
      HelpArgs a;
      if (toks.size() == 1) {
        a.topic = parse_verb(toks[0]);
        if (!a.topic)
          throw CommandError(CommandError::Kind::BadArgument, fmt::format("no help for '{}'\n{}", toks[0],
                                                                            render_help()));
      }
      c.args = a;
      break;
    }
  }
  return c;
}

}  // namespace botrf
