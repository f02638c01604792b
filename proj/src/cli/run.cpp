#include "hz/cli/run.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "hz/cli/cache.hpp"
#include "hz/cli/checks.hpp"
#include "hz/cli/config.hpp"
#include "hz/cli/record.hpp"
#include "hz/error.hpp"
#include "hz/geom/group_io.hpp"
#include "hz/numeric.hpp"
#include "hz/trace/traces.hpp"
#include "hz/zeta/determinant.hpp"
#include "hz/zeta/resonance.hpp"
#include "hz/zeta/zeta.hpp"

namespace hz::cli {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Which flag to change when a module reports a given failure.
std::string hint(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OverlappingIntervals:
    case ErrorKind::NonHyperbolicGenerator:
    case ErrorKind::InvalidGroup:
    case ErrorKind::NonInteriorPoint: return "fix the group file given by --group";
    case ErrorKind::CapacityExceeded: return "lower --n-max";
    case ErrorKind::TailDominates: return "raise --R";
    case ErrorKind::OutsideConvergence: return "use --method determinant or move --lambda right";
    case ErrorKind::TailTooLarge: return "raise --n-max or move --lambda right";
    case ErrorKind::NonDecaying: return "raise --order or move --rect / --lambda right";
    case ErrorKind::NoZeroInBracket: return "raise --order";
    case ErrorKind::StripViolation: return "keep |Re --lambda| < 1/2 - delta or use --method determinant";
    case ErrorKind::NearZeroOfZ: return "move --lambda off the zero";
    case ErrorKind::ContourThroughZero: return "change --rect, --grid or --residue-radius";
    case ErrorKind::QuadratureStall: return "loosen --quad-tol";
    case ErrorKind::RegimeViolation: return "this group or --lambda is outside the supported regime";
    case ErrorKind::PruneBoundViolated: return "report this group: the orbit pruning bound failed";
    case ErrorKind::CacheUnwritable: return "set --cache-dir or HZ_CACHE_DIR";
    case ErrorKind::InputError: return "see --help";
  }
  return "see --help";
}

// Precondition failures are input errors (exit 2); numerical failures mean
// the requested result could not be verified (exit 1).
int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OverlappingIntervals:
    case ErrorKind::NonHyperbolicGenerator:
    case ErrorKind::InvalidGroup:
    case ErrorKind::NonInteriorPoint:
    case ErrorKind::OutsideConvergence:
    case ErrorKind::StripViolation:
    case ErrorKind::RegimeViolation:
    case ErrorKind::CapacityExceeded:
    case ErrorKind::InputError: return kExitInputError;
    default: return kExitVerificationFailed;
  }
}

cplx parse_complex(const std::string& text) {
  std::istringstream in(text);
  double re = 0.0, im = 0.0;
  char comma = 0;
  if (!(in >> re)) throw Error(ErrorKind::InputError, "cannot read '" + text + "' as re[,im]");
  if (in >> comma) {
    if (comma != ',' || !(in >> im)) throw Error(ErrorKind::InputError, "cannot read '" + text + "' as re[,im]");
  }
  return {re, im};
}

class Session {
 public:
  Session(const RunConfig& cfg, std::ostream& out, std::ostream& err)
      : cfg_(cfg), writer_(out, cfg.format), err_(err) {}

  int dispatch() {
    const std::map<std::string, std::function<int()>> commands{
        {"group-validate", [this] { return group_validate(); }},
        {"classes", [this] { return classes(); }},
        {"zeta-eval", [this] { return zeta_eval(); }},
        {"l-gamma", [this] { return l_gamma(); }},
        {"zeta-zeros", [this] { return zeta_zeros(); }},
        {"delta", [this] { return delta(); }},
        {"trace-compare", [this] { return trace_compare(); }},
        {"resolvent-t5", [this] { return resolvent_t5(); }},
        {"verify-all", [this] { return verify(); }},
    };
    return commands.at(cfg_.command)();
  }

 private:
  void load_group() {
    if (cfg_.group_path.empty()) throw Error(ErrorKind::InputError, "--group is required");
    spec_ = geom::load_group_spec(cfg_.group_path);
    group_ = geom::build_schottky(*spec_);
    hash_ = geom::content_hash(*group_);
    fixture_name_ = fs::path(cfg_.group_path).stem().string();
  }

  const geom::ClassTable& table() {
    if (!table_) {
      const fs::path root = cfg_.cache_dir.empty() ? ClassTableCache::default_root() : fs::path(cfg_.cache_dir);
      auto got = ClassTableCache(root).get(*group_, cfg_.n_max, cfg_.threads);
      if (!got.warning.empty()) err_ << "warning: " << got.warning << '\n';
      err_ << "class table " << (got.hit ? "cache hit" : "computed") << ": "
           << ClassTableCache(root).path_for(hash_, cfg_.n_max).string() << '\n';
      table_ = std::move(got.table);
    }
    return *table_;
  }

  double delta_classical() {
    if (!delta_) delta_ = zeta::critical_exponent(table(), std::min(cfg_.order, cfg_.n_max)).delta;
    return *delta_;
  }

  zeta::SigmaCharacter sigma() const { return zeta::parse_sigma(cfg_.sigma); }

  ResultRecord record(Fields outputs, double seconds) const {
    ResultRecord r;
    r.command = cfg_.command;
    r.group_hash = hash_;
    r.inputs = {{"group", fixture_name_}, {"n_max", static_cast<long long>(cfg_.n_max)},
                {"order", static_cast<long long>(cfg_.order)}};
    r.outputs = std::move(outputs);
    r.wall_time = seconds;
    return r;
  }

  void emit(Fields outputs, double seconds) { writer_.write(record(std::move(outputs), seconds)); }

  int group_validate() {
    const auto t0 = Clock::now();
    load_group();
    std::string kind = spec_->cylinder ? "cylinder" : spec_->symmetric ? "symmetric" : "explicit";
    emit({{"valid", true},
          {"rank", static_cast<long long>(group_->rank())},
          {"template", kind},
          {"min_translation_length", group_->min_translation_length()}},
         since(t0));
    return kExitOk;
  }

  int classes() {
    const auto t0 = Clock::now();
    load_group();
    const auto& t = table();
    emit({{"n_max", static_cast<long long>(t.n_max)},
          {"classes", static_cast<long long>(t.records.size())},
          {"primitive", static_cast<long long>(t.primitive_count())},
          {"min_length", t.min_length()},
          {"length_rate", t.length_rate()}},
         since(t0));
    return kExitOk;
  }

  std::vector<cplx> lambdas() const {
    if (cfg_.lambdas.empty()) throw Error(ErrorKind::InputError, "--lambda is required");
    return cfg_.lambdas;
  }

  Fields value_fields(cplx lambda, cplx value, double tail) const {
    return {{"sigma", cfg_.sigma},         {"lambda_re", lambda.real()}, {"lambda_im", lambda.imag()},
            {"value_re", value.real()},    {"value_im", value.imag()},   {"method", cfg_.method},
            {"tail_bound", tail}};
  }

  int zeta_eval() {
    load_group();
    const auto s = sigma();
    std::optional<zeta::Determinant> det;
    for (cplx lam : lambdas()) {
      const auto t0 = Clock::now();
      cplx value;
      double tail;
      if (cfg_.method == "product") {
        const auto z = zeta::zeta_product(table(), s, lam, delta_classical());
        value = z.value;
        tail = z.tail_bound;
      } else {
        if (!det) det.emplace(table(), s, cfg_.order);
        const auto e = det->expand(to_s(lam), 0, true);
        value = e.value[0];
        tail = e.error_estimate;
      }
      emit(value_fields(lam, value, tail), since(t0));
    }
    return kExitOk;
  }

  int l_gamma() {
    load_group();
    const auto s = sigma();
    std::optional<zeta::Determinant> det, coarse;
    for (cplx lam : lambdas()) {
      const auto t0 = Clock::now();
      cplx value;
      double tail;
      if (cfg_.method == "product") {
        value = zeta::L_gamma_product(table(), s, lam, delta_classical());
        tail = zeta::log_deriv_zeta(table(), s, lam, delta_classical()).tail_bound +
               zeta::log_deriv_zeta(table(), s, -lam, delta_classical()).tail_bound;
      } else {
        if (!det) {
          det.emplace(table(), s, cfg_.order);
          coarse.emplace(table(), s, std::max(1, cfg_.order - 1));
        }
        value = zeta::L_gamma_determinant(*det, lam);
        tail = std::abs(value - zeta::L_gamma_determinant(*coarse, lam));
      }
      emit(value_fields(lam, value, tail), since(t0));
    }
    return kExitOk;
  }

  int zeta_zeros() {
    load_group();
    const zeta::Determinant det(table(), sigma(), cfg_.order);
    zeta::ZeroSearchOptions opt;
    opt.grid_re = cfg_.grid_re;
    opt.grid_im = cfg_.grid_im;
    opt.threads = cfg_.threads;
    const auto t0 = Clock::now();
    const auto res = zeta::zero_search(det, cfg_.rect_lo, cfg_.rect_hi, opt);
    const double search_time = since(t0);
    bool ok = true;
    for (std::size_t i = 0; i < res.zeros.size(); ++i) {
      const auto t1 = Clock::now();
      const auto& z = res.zeros[i];
      double rho = cfg_.residue_radius;
      for (const auto& w : res.zeros) {
        if (&w != &z) rho = std::min(rho, 0.4 * std::abs(w.mu - z.mu));
        rho = std::min(rho, 0.4 * std::abs(-w.mu - z.mu));
      }
      const auto rc = zeta::residue_check(det, z.mu, rho);
      const bool good = z.verified && rc.consistent && rc.defect <= cfg_.tolerance;
      ok = ok && good;
      emit({{"sigma", cfg_.sigma},
            {"mu_re", z.mu.real()},
            {"mu_im", z.mu.imag()},
            {"order", static_cast<long long>(z.order)},
            {"abs_det", z.abs_det},
            {"verified", z.verified},
            {"residue_re", rc.residue.real()},
            {"residue_im", rc.residue.imag()},
            {"residue_defect", rc.defect},
            {"order_minus_mu", static_cast<long long>(rc.order_minus_mu)},
            {"consistent", rc.consistent},
            {"radius", rho}},
           since(t1) + (i == 0 ? search_time : 0.0));
    }
    return ok ? kExitOk : kExitVerificationFailed;
  }

  int delta() {
    const auto t0 = Clock::now();
    load_group();
    const auto ce = zeta::critical_exponent(table(), std::min(cfg_.order, cfg_.n_max));
    const double defect = std::abs(ce.delta - ce.poincare);
    emit({{"delta", ce.delta},
          {"delta_gamma", ce.delta_gamma},
          {"multiplicity", static_cast<long long>(ce.multiplicity)},
          {"poincare", ce.poincare},
          {"poincare_lo", ce.poincare_lo},
          {"poincare_hi", ce.poincare_hi},
          {"defect", defect}},
         since(t0));
    return defect <= cfg_.tolerance ? kExitOk : kExitVerificationFailed;
  }

  Fields side_fields(const trace::TraceResult& r, double parameter) const {
    return {{"fixture", fixture_name_},         {"side", trace::to_string(r.side)},
            {"value", r.value},                 {"tail", r.tail},
            {"t_or_lambda", parameter},         {"n_max", static_cast<long long>(r.n_max)},
            {"R", r.R}};
  }

  int trace_compare() {
    load_group();
    bool ok = true;
    const bool spectral_regime = delta_classical() < 0.5;
    for (double t : cfg_.times) {
      const auto t0 = Clock::now();
      const auto f = trace::RadialTestFunction::heat(t);
      const auto geo = trace::geometric_side(table(), group_->rank(), f);
      trace::KernelDifferenceOptions kopt;
      kopt.quadrature.rel_tol = cfg_.quad_tol;
      kopt.quadrature.threads = cfg_.threads;
      kopt.kernel_floor = cfg_.kernel_floor;
      const auto kd = trace::kernel_difference_trace(*group_, f, cfg_.R, kopt);
      std::optional<trace::TraceResult> sp;
      if (spectral_regime) {
        trace::SpectralOptions sopt;
        sopt.det_order = cfg_.order;
        sopt.threads = cfg_.threads;
        sp = trace::spectral_side(table(), f, sopt);
      }
      const double kd_defect = std::abs(kd.value - geo.value) / geo.value;
      const double sp_defect = sp ? std::abs(sp->value - geo.value) / geo.value : NAN;
      ok = ok && kd_defect <= cfg_.tolerance && (!sp || sp_defect <= cfg_.tolerance);
      const double seconds = since(t0);
      if (cfg_.format == "json") {
        emit(side_fields(geo, t), seconds);
        emit(side_fields(kd, t), 0.0);
        if (sp) emit(side_fields(*sp, t), 0.0);
      } else {
        emit({{"t", t},
              {"geometric", geo.value},
              {"kernel_difference", kd.value},
              {"spectral", sp ? sp->value : NAN},
              {"defect_kernel_difference", kd_defect},
              {"defect_spectral", sp_defect},
              {"discrete_term_bound", sp ? trace::discrete_term_bound(*sp, geo, f) : NAN}},
             seconds);
      }
    }
    return ok ? kExitOk : kExitVerificationFailed;
  }

  int resolvent_t5() {
    load_group();
    bool ok = true;
    trace::ResolventOptions opt;
    opt.radius_step = cfg_.radius_step;
    opt.det_order = cfg_.order;
    opt.kernel.kernel_floor = cfg_.kernel_floor;
    opt.kernel.quadrature.rel_tol = cfg_.quad_tol;
    opt.kernel.quadrature.threads = cfg_.threads;
    for (cplx lam : lambdas()) {
      if (lam.imag() != 0.0) throw Error(ErrorKind::InputError, "resolvent-t5 takes real --lambda values");
      const auto t0 = Clock::now();
      const auto q = trace::resolvent_regularized_trace(*group_, table(), lam.real(), cfg_.R, opt);
      ok = ok && q.t5_defect <= cfg_.tolerance;
      auto fields = side_fields(q.Q, lam.real());
      fields.emplace_back("raw", q.raw);
      fields.emplace_back("expected", q.expected);
      fields.emplace_back("t5_defect", q.t5_defect);
      fields.emplace_back("observed_ratio", q.observed_ratio);
      emit(std::move(fields), since(t0));
    }
    return ok ? kExitOk : kExitVerificationFailed;
  }

  int verify() {
    load_group();
    const Fixture fx = make_fixture(fixture_name_, *spec_, cfg_.n_max, cfg_.order, &table());
    bool ok = true;
    for (const auto& c : verify_all(fx)) {
      ok = ok && c.passed;
      emit({{"criterion", static_cast<long long>(c.criterion)},
            {"check", c.name},
            {"passed", c.passed},
            {"value", c.value},
            {"tolerance", c.tolerance},
            {"detail", c.detail}},
           c.seconds);
    }
    return ok ? kExitOk : kExitVerificationFailed;
  }

  RunConfig cfg_;
  RecordWriter writer_;
  std::ostream& err_;
  std::optional<geom::GroupSpec> spec_;
  std::optional<geom::SchottkyData> group_;
  std::optional<geom::ClassTable> table_;
  std::optional<double> delta_;
  std::string hash_;
  std::string fixture_name_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zeta functions, resonances and trace identities of Schottky groups"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig flags;
  std::string config_path, save_config;
  std::vector<std::string> lambda_text;
  std::vector<double> rect;
  std::string grid;
  // Each flag that was given overrides the --config file.
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> overrides;
  auto flag = [&](CLI::Option* o, std::function<void(RunConfig&)> apply) {
    overrides.emplace_back(o, std::move(apply));
    return o;
  };

  app.add_option("--config", config_path, "JSON run configuration; flags override it")->check(CLI::ExistingFile);
  app.add_option("--save-config", save_config, "write the effective configuration here and continue");
  flag(app.add_option("--group", flags.group_path, "group specification file"),
       [&](RunConfig& c) { c.group_path = flags.group_path; });
  flag(app.add_option("--n-max", flags.n_max, "class table word length"), [&](RunConfig& c) { c.n_max = flags.n_max; });
  flag(app.add_option("--order", flags.order, "trace order N of the determinant"),
       [&](RunConfig& c) { c.order = flags.order; });
  flag(app.add_option("--sigma", flags.sigma, "character of M: trivial | sign"),
       [&](RunConfig& c) { c.sigma = flags.sigma; });
  flag(app.add_option("--method", flags.method, "product | determinant"),
       [&](RunConfig& c) { c.method = flags.method; });
  flag(app.add_option("--tolerance", flags.tolerance, "verification threshold for defects"),
       [&](RunConfig& c) { c.tolerance = flags.tolerance; });
  flag(app.add_option("--cache-dir", flags.cache_dir, "class table cache (default: $HZ_CACHE_DIR)"),
       [&](RunConfig& c) { c.cache_dir = flags.cache_dir; });
  flag(app.add_option("--threads", flags.threads, "worker threads (0: hardware)"),
       [&](RunConfig& c) { c.threads = flags.threads; });
  flag(app.add_option("--format", flags.format, "json | csv"), [&](RunConfig& c) { c.format = flags.format; });
  flag(app.add_option("--output", flags.output, "append records to this file instead of stdout"),
       [&](RunConfig& c) { c.output = flags.output; });
  flag(app.add_option("--lambda", lambda_text, "spectral parameter re[,im]; repeatable"), [&](RunConfig& c) {
    c.lambdas.clear();
    for (const auto& t : lambda_text) c.lambdas.push_back(parse_complex(t));
  });
  flag(app.add_option("--rect", rect, "lo_re,lo_im,hi_re,hi_im")->delimiter(',')->expected(4), [&](RunConfig& c) {
    c.rect_lo = {rect[0], rect[1]};
    c.rect_hi = {rect[2], rect[3]};
  });
  flag(app.add_option("--grid", grid, "cells as RExIM, e.g. 6x6"), [&](RunConfig& c) {
    const auto x = grid.find('x');
    try {
      if (x == std::string::npos) throw std::invalid_argument(grid);
      c.grid_re = std::stoi(grid.substr(0, x));
      c.grid_im = std::stoi(grid.substr(x + 1));
    } catch (const std::exception&) {
      throw Error(ErrorKind::InputError, "--grid expects RExIM, got '" + grid + "'");
    }
  });
  flag(app.add_option("--residue-radius", flags.residue_radius, "largest residue circle radius"),
       [&](RunConfig& c) { c.residue_radius = flags.residue_radius; });
  flag(app.add_option("--t", flags.times, "heat times, comma separated")->delimiter(','),
       [&](RunConfig& c) { c.times = flags.times; });
  flag(app.add_option("--R", flags.R, "radius of the fundamental-domain disk"), [&](RunConfig& c) { c.R = flags.R; });
  flag(app.add_option("--radius-step", flags.radius_step, "radius spacing for the resolvent extrapolation"),
       [&](RunConfig& c) { c.radius_step = flags.radius_step; });
  flag(app.add_option("--kernel-floor", flags.kernel_floor, "relative kernel cut-off for orbit sums"),
       [&](RunConfig& c) { c.kernel_floor = flags.kernel_floor; });
  flag(app.add_option("--quad-tol", flags.quad_tol, "fundamental-domain quadrature tolerance"),
       [&](RunConfig& c) { c.quad_tol = flags.quad_tol; });

  const std::vector<std::pair<std::string, std::string>> subcommands{
      {"group-validate", "check a group file and print its content hash"},
      {"classes", "enumerate (or load cached) conjugacy classes to --n-max"},
      {"zeta-eval", "Z(lambda) by the product or the determinant"},
      {"zeta-zeros", "resonances in --rect with residue checks"},
      {"delta", "critical exponent with the Poincare cross-check"},
      {"l-gamma", "L(lambda) = Z'/Z(lambda) + Z'/Z(-lambda)"},
      {"trace-compare", "geometric, kernel-difference and spectral sides for heat --t"},
      {"resolvent-t5", "resolvent trace Q against (1/2 lambda) Z'/Z"},
      {"verify-all", "every acceptance check that applies to --group"},
  };
  for (const auto& [name, help] : subcommands) app.add_subcommand(name, help);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      std::stringstream buf;
      buf << in.rdbuf();
      cfg = config_from_json(buf.str());
    }
    for (auto& [opt, apply] : overrides) {
      if (opt->count() > 0) apply(cfg);
    }
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.validate();
    if (!save_config.empty()) std::ofstream(save_config) << config_to_json(cfg) << '\n';
    if (cfg.threads > 0) set_concurrency(cfg.threads);

    std::ofstream file;
    if (!cfg.output.empty()) {
      file.open(cfg.output, std::ios::app);
      if (!file) throw Error(ErrorKind::InputError, "cannot open --output '" + cfg.output + "'");
    }
    Session session(cfg, cfg.output.empty() ? out : file, err);
    return session.dispatch();
  } catch (const Error& e) {
    err << "error: " << e.what() << " (" << hint(e.kind()) << ")\n";
    return exit_code_for(e.kind());
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace hz::cli
