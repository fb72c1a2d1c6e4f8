// Batch front door: sampling kernels and stable laws, evaluating transforms,
// simulating processes and integrals, and running the verification suite.
// Deterministic for a fixed --seed: identical argv produce identical bytes.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gconv/convolution.hpp"
#include "gconv/errors.hpp"
#include "gconv/gcf.hpp"
#include "gconv/infdiv.hpp"
#include "gconv/measure.hpp"
#include "gconv/parallel.hpp"
#include "gconv/process.hpp"
#include "gconv/stats.hpp"
#include "gconv/verify.hpp"
#include "gconv/weakintegral.hpp"
#include "gconv/weakmeasure.hpp"
#include "gconv/weakstable.hpp"

namespace {

using gconv::format_double;

struct GlobalOpts {
  std::uint64_t seed = 1;
  std::size_t samples = 0;  // 0 = subcommand default
  std::string format = "csv";
  std::string out;
};

std::ostream& open_sink(const GlobalOpts& g, std::ofstream& file) {
  if (g.out.empty()) return std::cout;
  file.open(g.out);
  if (!file) throw gconv::argument_error("cannot open --out file '" + g.out + "'");
  return file;
}

// measure spec accepted by --measure: dirac:<x> | diracmix:w@x,w@x | file:<path>
gconv::Measure parse_measure(const std::string& text) {
  if (text.rfind("dirac:", 0) == 0) {
    return gconv::Measure::dirac(std::stod(text.substr(6)));
  }
  if (text.rfind("diracmix:", 0) == 0) {
    std::vector<gconv::Atom> atoms;
    std::stringstream ss(text.substr(9));
    std::string piece;
    while (std::getline(ss, piece, ',')) {
      const auto at = piece.find('@');
      if (at == std::string::npos) {
        throw gconv::argument_error("diracmix atom '" + piece + "' must be w@x");
      }
      atoms.push_back({std::stod(piece.substr(at + 1)), std::stod(piece.substr(0, at))});
    }
    return gconv::Measure::dirac_mix(std::move(atoms));
  }
  if (text.rfind("file:", 0) == 0) {
    std::ifstream in(text.substr(5));
    if (!in) throw gconv::argument_error("cannot read measure file '" + text.substr(5) + "'");
    return gconv::Measure::read_csv(in);
  }
  throw gconv::argument_error("unknown measure spec '" + text + "'");
}

void emit_samples(std::ostream& os, const std::vector<double>& xs, const std::string& format) {
  if (format == "json") {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (double v : xs) j.push_back(v);
    os << j.dump() << "\n";
    return;
  }
  os << "x\n";
  for (double v : xs) os << format_double(v) << "\n";
}

void emit_measure(std::ostream& os, const gconv::Measure& m, const std::string& format) {
  if (format == "json") {
    nlohmann::ordered_json j;
    if (m.kind() == gconv::MeasureKind::Empirical) {
      j["kind"] = "empirical";
      j["samples"] = m.samples();
    } else {
      j["kind"] = m.kind() == gconv::MeasureKind::DiracMix ? "diracmix" : "mixture";
      nlohmann::ordered_json atoms = nlohmann::ordered_json::array();
      for (const gconv::Atom& a : m.components().atoms()) {
        atoms.push_back({{"point", a.point}, {"weight", a.weight}});
      }
      j["atoms"] = atoms;
      j["grid"] = m.components().grid();
      j["density"] = m.components().density();
      j["tail_mass"] = m.components().tail_mass();
    }
    os << j.dump() << "\n";
    return;
  }
  m.write_csv(os);
}

int run_verify_cmd(const GlobalOpts& g, const std::string& suite, std::ostream& os,
                   const std::string& format) {
  const std::vector<gconv::VerifyResult> results = gconv::run_verify(suite, g.seed);
  bool all_pass = true;
  if (format == "json") {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& r : results) {
      all_pass = all_pass && r.pass;
      j.push_back({{"test", r.test},
                   {"statistic", r.statistic},
                   {"threshold", r.threshold},
                   {"pass", r.pass},
                   {"samples", r.samples},
                   {"seed", r.seed},
                   {"note", r.note}});
    }
    os << j.dump(2) << "\n";
  } else {
    os << "test,statistic,threshold,pass,samples,seed\n";
    for (const auto& r : results) {
      all_pass = all_pass && r.pass;
      os << r.test << "," << format_double(r.statistic) << "," << format_double(r.threshold)
         << "," << (r.pass ? "1" : "0") << "," << r.samples << "," << r.seed << "\n";
    }
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized-convolution laboratory"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  GlobalOpts g;
  app.add_option("--seed", g.seed, "root random seed")->capture_default_str();
  app.add_option("--samples", g.samples, "sample-size override");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", g.out, "write output to a file instead of stdout");

  // kernel
  auto* kernel = app.add_subcommand("kernel", "point-mass convolution law or draws");
  std::string kernel_conv;
  double kx = 0.0, ky = 0.0;
  std::size_t kernel_draws = 0;
  kernel->add_option("--conv", kernel_conv, "algebra, e.g. kendall:a=0.7")->required();
  kernel->add_option("--x", kx)->required();
  kernel->add_option("--y", ky)->required();
  kernel->add_option("--draw", kernel_draws, "emit this many kernel draws instead of the law");

  // gcf
  auto* gcf_cmd = app.add_subcommand("gcf", "generalized characteristic function on a t-grid");
  std::string gcf_conv, gcf_measure;
  double gcf_tmax = 2.0;
  std::size_t gcf_steps = 8;
  gcf_cmd->add_option("--conv", gcf_conv)->required();
  gcf_cmd->add_option("--measure", gcf_measure, "dirac:<x> | diracmix:w@x,... | file:<csv>")
      ->required();
  gcf_cmd->add_option("--tmax", gcf_tmax);
  gcf_cmd->add_option("--steps", gcf_steps, "number of grid steps after 0");

  // stable
  auto* stable = app.add_subcommand("stable", "standard stable laws of one algebra");
  std::string stable_conv;
  double stable_p = 1.0;
  bool stable_density_flag = false;
  double stable_x = 1.0;
  stable->add_option("--conv", stable_conv)->required();
  stable->add_option("--p", stable_p)->required();
  stable->add_flag("--density", stable_density_flag, "print the density at --x instead of drawing");
  stable->add_option("--x", stable_x);

  // cpoisson
  auto* cpois = app.add_subcommand("cpoisson", "compound Poisson draws or truncated mixture");
  std::string cp_conv, cp_jump = "dirac:1";
  double cp_a = 1.0;
  bool cp_measure_flag = false;
  std::size_t cp_kmax = 0;
  cpois->add_option("--conv", cp_conv)->required();
  cpois->add_option("--a", cp_a, "jump intensity")->required();
  cpois->add_option("--jump", cp_jump, "jump law");
  cpois->add_flag("--measure", cp_measure_flag, "emit the truncated series mixture");
  cpois->add_option("--kmax", cp_kmax, "series cut (default from intensity)");

  // levy-path
  auto* levy = app.add_subcommand("levy-path", "simulate the Markov chain over a time grid");
  std::string levy_conv, levy_family = "stable:p=1";
  double levy_tmax = 1.0;
  std::size_t levy_steps = 16, levy_paths = 1;
  levy->add_option("--conv", levy_conv)->required();
  levy->add_option("--family", levy_family, "stable:p=<p> | cpoisson:a=<a>,jump=<x>");
  levy->add_option("--tmax", levy_tmax);
  levy->add_option("--steps", levy_steps);
  levy->add_option("--paths", levy_paths);

  // weak-poisson
  auto* weakp = app.add_subcommand("weak-poisson", "unit-jump pair process path(s)");
  std::string weak_law = "sphere:n=3";
  double weak_c = 1.0, weak_tmax = 1.0;
  std::size_t weak_steps = 16, weak_paths = 1;
  weakp->add_option("--law", weak_law, "sas:p=| sphere:n= | twopoint");
  weakp->add_option("--c", weak_c, "jump intensity");
  weakp->add_option("--tmax", weak_tmax);
  weakp->add_option("--steps", weak_steps);
  weakp->add_option("--paths", weak_paths);

  // integrate
  auto* integ = app.add_subcommand("integrate", "weak stochastic integral of a step function");
  std::string integ_law = "sas:p=2", integ_base = "cpoisson:a=1", integ_f, integ_nu;
  double integ_control = 1.0, integ_A = 0.0, integ_tmax = 2.0;
  std::size_t integ_steps = 8;
  bool integ_cf = false;
  integ->add_option("--law", integ_law)->required();
  integ->add_option("--f", integ_f, "step function, e.g. \"1@[0,1);2@[1,2)\"")->required();
  integ->add_option("--base", integ_base, "cpoisson:a=<a> | stable:beta=<b>");
  integ->add_option("--control", integ_control, "Lebesgue intensity of the control measure");
  integ->add_flag("--cf", integ_cf, "emit the closed-form cf on a t-grid instead of draws");
  integ->add_option("--A", integ_A, "scale part of the exponent data (with --cf)");
  integ->add_option("--nu", integ_nu, "spectral atoms w@s,w@s (with --cf)");
  integ->add_option("--tmax", integ_tmax);
  integ->add_option("--steps", integ_steps);

  // verify
  auto* verify = app.add_subcommand("verify", "run the statistical verification suite");
  std::string verify_suite = "all";
  verify->add_option("--suite", verify_suite, "kernels|stable|cpoisson|processes|weak|integral|acceptance|all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage errors
  }

  std::ofstream file;
  try {
    std::ostream& os = open_sink(g, file);
    const gconv::RngStream root(g.seed, 0);

    if (kernel->parsed()) {
      const gconv::ConvSpec spec = gconv::ConvSpec::parse(kernel_conv);
      if (kernel_draws > 0) {
        std::vector<double> xs = gconv::par::draw_batch(
            kernel_draws, root, [&](gconv::RngStream& rng) {
              return gconv::kernel_sample(spec, kx, ky, rng);
            });
        emit_samples(os, xs, g.format);
      } else {
        emit_measure(os, gconv::kernel_measure(spec, kx, ky), g.format);
      }
      return 0;
    }

    if (gcf_cmd->parsed()) {
      const gconv::ConvSpec spec = gconv::ConvSpec::parse(gcf_conv);
      const gconv::Measure m = parse_measure(gcf_measure);
      nlohmann::ordered_json rows = nlohmann::ordered_json::array();
      if (g.format != "json") os << "t,phi,stderr\n";
      for (std::size_t i = 0; i <= gcf_steps; ++i) {
        const double t = gcf_tmax * static_cast<double>(i) / static_cast<double>(gcf_steps);
        gconv::GcfValue v;
        if (m.kind() == gconv::MeasureKind::SamplerBacked) {
          const std::size_t n = g.samples ? g.samples : 1000000;
          v = gconv::gcf_mc(spec, m, t, n, root.child(i));
        } else {
          v = gconv::gcf(spec, m, t);
        }
        if (g.format == "json") {
          rows.push_back({{"t", t}, {"phi", v.value}, {"stderr", v.stderr_}});
        } else {
          os << format_double(t) << "," << format_double(v.value) << ","
             << format_double(v.stderr_) << "\n";
        }
      }
      if (g.format == "json") os << rows.dump() << "\n";
      return 0;
    }

    if (stable->parsed()) {
      const gconv::ConvSpec spec = gconv::ConvSpec::parse(stable_conv);
      if (stable_density_flag) {
        os << format_double(gconv::stable_density(spec, stable_p, stable_x)) << "\n";
        return 0;
      }
      const std::size_t n = g.samples ? g.samples : 100000;
      std::vector<double> xs = gconv::par::draw_batch(n, root, [&](gconv::RngStream& rng) {
        return gconv::stable_sample(spec, stable_p, rng);
      });
      emit_samples(os, xs, g.format);
      return 0;
    }

    if (cpois->parsed()) {
      const gconv::ConvSpec spec = gconv::ConvSpec::parse(cp_conv);
      const gconv::CompoundPoissonSpec cp(spec, cp_a, parse_measure(cp_jump));
      if (cp_measure_flag) {
        const std::size_t kmax = cp_kmax ? cp_kmax : gconv::cpoisson_kmax(cp_a);
        emit_measure(os, gconv::cpoisson_measure(cp, kmax).measure, g.format);
        return 0;
      }
      const std::size_t n = g.samples ? g.samples : 100000;
      std::vector<double> xs = gconv::par::draw_batch(n, root, [&](gconv::RngStream& rng) {
        return gconv::cpoisson_sample(cp, rng);
      });
      emit_samples(os, xs, g.format);
      return 0;
    }

    if (levy->parsed()) {
      const gconv::ConvSpec spec = gconv::ConvSpec::parse(levy_conv);
      gconv::IncrementFamily family;
      if (levy_family.rfind("stable:p=", 0) == 0) {
        family = gconv::stable_increment_family(spec, std::stod(levy_family.substr(9)));
      } else if (levy_family.rfind("cpoisson:a=", 0) == 0) {
        const std::string rest = levy_family.substr(11);
        const auto comma = rest.find(",jump=");
        const double a = std::stod(rest.substr(0, comma));
        const double jump = comma == std::string::npos ? 1.0 : std::stod(rest.substr(comma + 6));
        family = gconv::cpoisson_increment_family(spec, a, gconv::Measure::dirac(jump));
      } else {
        throw gconv::argument_error("unknown increment family '" + levy_family + "'");
      }
      std::vector<double> grid(levy_steps + 1);
      for (std::size_t i = 0; i <= levy_steps; ++i) {
        grid[i] = levy_tmax * static_cast<double>(i) / static_cast<double>(levy_steps);
      }
      os << (levy_paths > 1 ? "path_id,t,state\n" : "t,state\n");
      std::vector<double> terminals;
      for (std::size_t p = 0; p < levy_paths; ++p) {
        gconv::RngStream rng = root.child(p);
        const gconv::PathRecord path = gconv::simulate_levy(spec, family, grid, rng);
        terminals.push_back(path.states.back());
        for (std::size_t i = 0; i < path.times.size(); ++i) {
          if (levy_paths > 1) os << p << ",";
          os << format_double(path.times[i]) << "," << format_double(path.states[i]) << "\n";
        }
      }
      if (levy_paths >= 200) {
        // heavy-tail diagnostic, informational only
        const std::size_t k = levy_paths / 20;
        try {
          std::cerr << "# hill tail index of terminal states (k=" << k
                    << "): " << format_double(gconv::hill_tail_index(terminals, k)) << "\n";
        } catch (const gconv::argument_error&) {
        }
      }
      return 0;
    }

    if (weakp->parsed()) {
      const gconv::WeaklyStableLaw law = gconv::WeaklyStableLaw::parse(weak_law);
      std::vector<double> grid(weak_steps + 1);
      for (std::size_t i = 0; i <= weak_steps; ++i) {
        grid[i] = weak_tmax * static_cast<double>(i) / static_cast<double>(weak_steps);
      }
      os << (weak_paths > 1 ? "path_id,t,S" : "t,S");
      for (std::size_t d = 0; d < law.dim(); ++d) os << ",Y" << (d + 1);
      os << "\n";
      for (std::size_t p = 0; p < weak_paths; ++p) {
        gconv::RngStream rng = root.child(p);
        const gconv::WeakPoissonPath path = gconv::weak_poisson_path(law, weak_c, grid, rng);
        for (std::size_t i = 0; i < path.times.size(); ++i) {
          if (weak_paths > 1) os << p << ",";
          os << format_double(path.times[i]) << "," << format_double(path.S[i]);
          for (double y : path.Y[i]) os << "," << format_double(y);
          os << "\n";
        }
      }
      return 0;
    }

    if (integ->parsed()) {
      const gconv::WeaklyStableLaw law = gconv::WeaklyStableLaw::parse(integ_law);
      const gconv::StepFunction f = gconv::StepFunction::parse(integ_f);
      const gconv::ControlMeasure control = gconv::ControlMeasure::lebesgue(integ_control);
      if (integ_cf) {
        gconv::FiniteMeasure nu;
        if (!integ_nu.empty()) {
          std::stringstream ss(integ_nu);
          std::string piece;
          while (std::getline(ss, piece, ',')) {
            const auto at = piece.find('@');
            if (at == std::string::npos) {
              throw gconv::argument_error("nu atom '" + piece + "' must be w@s");
            }
            nu.add_atom(std::stod(piece.substr(at + 1)), std::stod(piece.substr(0, at)));
          }
        }
        const gconv::WeakLevyTriple triple(law, integ_A, std::move(nu));
        os << "t,phi\n";
        for (std::size_t i = 0; i <= integ_steps; ++i) {
          const double t = integ_tmax * static_cast<double>(i) / static_cast<double>(integ_steps);
          os << format_double(t) << ","
             << format_double(gconv::weak_integral_cf(triple, control, f, t)) << "\n";
        }
        return 0;
      }
      gconv::WeakJumpBase base = gconv::WeakJumpBase::compound_poisson(1.0);
      if (integ_base.rfind("cpoisson:a=", 0) == 0) {
        base = gconv::WeakJumpBase::compound_poisson(std::stod(integ_base.substr(11)));
      } else if (integ_base.rfind("stable:beta=", 0) == 0) {
        base = gconv::WeakJumpBase::stable(std::stod(integ_base.substr(12)));
      } else {
        throw gconv::argument_error("unknown jump base '" + integ_base + "'");
      }
      const gconv::WeakRandomMeasureSpec spec(law, base, control);
      const std::size_t n = g.samples ? g.samples : 100000;
      std::vector<double> xs = gconv::par::draw_batch(n, root, [&](gconv::RngStream& rng) {
        return gconv::weak_integral_sample(spec, f, rng);
      });
      emit_samples(os, xs, g.format);
      return 0;
    }

    if (verify->parsed()) {
      return run_verify_cmd(g, verify_suite, os, g.format);
    }
  } catch (const gconv::argument_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
