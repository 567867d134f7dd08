#include "gelfand/corpus.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gelfand {

namespace {

std::vector<double> parse_args(const std::string& args) {
  std::vector<double> out;
  std::stringstream ss(args);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

WeightedGraph path_graph(const std::vector<double>& weights) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < weights.size(); ++i)
    edges.push_back({std::to_string(i + 1), std::to_string(i + 2), weights[i]});
  return build_graph(edges);
}

constexpr double kInv2E = 0.18393972058572116;    // 1/(2e)
constexpr double kW0_02 = 0.25917110181907375;    // -W0(-0.2)
constexpr double kWm1_02 = 2.5426413577735264;    // -W-1(-0.2)

BuiltinExample path4_exp() {
  BuiltinExample ex;
  ex.name = "path4-exp";
  ex.description = "4-vertex unit path, Omega = {2,3}, f = e^s";
  ex.graph = path_graph({1, 1, 1});
  ex.omega = {"2", "3"};
  ex.f = Nonlinearity::exponential();
  ex.expected = {
      {"lambda_m", 0.5, 1e-12, "exact"},
      {"lambda_star", kInv2E, 1e-6, "exact"},
      {"u_star[2]", 1.0, 1e-6, "exact"},
      {"u_star[3]", 1.0, 1e-6, "exact"},
      {"minimal[2]@0.1", kW0_02, 1e-8, "exact"},
      {"minimal[3]@0.1", kW0_02, 1e-8, "exact"},
      {"upper[2]@0.1", kWm1_02, 1e-8, "exact"},
      {"mu1_minimal@0.1", 0.37041444909046313, 1e-9, "exact"},
      {"mu1_upper@0.1", -0.7713206788867632, 1e-9, "exact"},
      {"count@0.05", 4.0, 0.25, "cross-check"},
      {"count@0.1", 2.0, 0.25, "cross-check"},
  };
  return ex;
}

BuiltinExample path4_weighted(double a, double b) {
  BuiltinExample ex;
  ex.name = "path4-weighted";
  ex.description = "4-vertex path with weights (b, a, b), Omega = {2,3}, f = e^s";
  ex.graph = path_graph({b, a, b});
  ex.omega = {"2", "3"};
  ex.f = Nonlinearity::exponential();
  const double lm = b / (a + b);
  ex.expected = {
      {"lambda_m", lm, 1e-12, "exact"},
      {"lambda_star", lm / M_E, 1e-6, "exact"},
  };
  if (a == 2.0 && b == 3.0) {
    ex.expected.push_back({"minimal[2]@0.1", 0.20448144933991554, 1e-8, "exact"});  // -W0(-1/6)
    ex.expected.push_back({"lambda_star", 0.22072766470286538, 1e-6, "exact"});
  }
  return ex;
}

BuiltinExample path3_exp() {
  BuiltinExample ex;
  ex.name = "path3-exp";
  ex.description = "3-vertex unit path, Omega = {2,3}, f = e^s";
  ex.graph = path_graph({1, 1});
  ex.omega = {"2", "3"};
  ex.f = Nonlinearity::exponential();
  ex.expected = {
      {"lambda_m", 0.29289321881345254, 1e-12, "exact"},  // 1 - 1/sqrt(2)
      {"lambda_star", 0.10615942907740637, 2e-6, "cross-check"},
      {"lambda_star", 0.106159, 5e-5, "reference"},
      {"u_star[3]", 1.1647710603914068, 2e-5, "cross-check"},
  };
  return ex;
}

BuiltinExample path5_exp() {
  BuiltinExample ex;
  ex.name = "path5-exp";
  ex.description = "5-vertex unit path, Omega = {2,3,4}, f = e^s";
  ex.graph = path_graph({1, 1, 1, 1});
  ex.omega = {"2", "3", "4"};
  ex.f = Nonlinearity::exponential();
  ex.expected = {
      {"lambda_m", 0.29289321881345254, 1e-12, "exact"},
      {"lambda_star", 0.10615942907740637, 2e-6, "cross-check"},
      {"lambda_star", 0.106159, 5e-5, "reference"},
      {"u_star[3]", 1.164771, 5e-4, "reference"},
      {"u_star[2]", 0.8245100244751355, 2e-5, "cross-check"},
  };
  return ex;
}

BuiltinExample khat_n(double a, double b, double c, int n) {
  if (n < 3) throw std::invalid_argument("khat-n: need n >= 3");
  BuiltinExample ex;
  ex.name = "khat-n";
  ex.description = "cycle-with-chords K_n, every vertex tied to its own Dirichlet vertex";
  std::vector<Edge> edges;
  for (int i = 1; i <= n; ++i) {
    const int j = i % n + 1;
    edges.push_back({std::to_string(i), std::to_string(j), a});
  }
  if (c > 0.0) {
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j) {
        const bool ring = (j == i + 1) || (i == 1 && j == n);
        if (!ring) edges.push_back({std::to_string(i), std::to_string(j), c});
      }
  }
  for (int i = 1; i <= n; ++i) edges.push_back({std::to_string(i), std::to_string(-i), b});
  ex.graph = build_graph(edges);
  for (int i = 1; i <= n; ++i) ex.omega.push_back(std::to_string(i));
  ex.f = Nonlinearity::exponential();

  const double k = (2.0 * a + (n - 3) * c + b) / b;
  ex.expected = {
      {"lambda_m", 1.0 / k, 1e-12, "exact"},
      {"lambda_star", 1.0 / (k * M_E), 1e-6, "exact"},
      {"u_star[1]", 1.0, 1e-6, "exact"},
  };
  if (k == 3.0)
    ex.expected.push_back({"minimal[1]@0.1", 0.4894022271802150, 1e-8, "exact"});  // -W0(-0.3)
  return ex;
}

BuiltinExample envelope_graph() {
  BuiltinExample ex;
  ex.name = "envelope";
  ex.description = "4-cycle with a center vertex, every ring vertex tied to a Dirichlet vertex";
  std::vector<Edge> edges = {
      {"1", "2", 1}, {"2", "3", 1}, {"3", "4", 1}, {"4", "1", 1},
      {"1", "5", 1}, {"2", "5", 1}, {"3", "5", 1}, {"4", "5", 1},
      {"1", "-1", 1}, {"2", "-2", 1}, {"3", "-3", 1}, {"4", "-4", 1},
  };
  ex.graph = build_graph(edges);
  ex.omega = {"1", "2", "3", "4", "5"};
  ex.f = Nonlinearity::exponential();
  ex.expected = {
      {"lambda_m", 0.19098300562505258, 1e-12, "exact"},  // (3 - sqrt 5)/4
      {"ainv_max_abs_err", 0.0, 1e-12, "exact"},
      {"iterate2[1]@0.05", 0.32429802371634845, 1e-12, "exact"},  // 4l e^{5l} + l e^{6l}
      {"iterate2[5]@0.05", 0.39179096409514861, 1e-12, "exact"},  // 4l e^{5l} + 2l e^{6l}
      {"lambda_star", 0.06992823726047290, 1e-5, "cross-check"},
      {"u_star[5]", 1.1589402927946068, 1e-4, "cross-check"},
  };
  return ex;
}

BuiltinExample path4_asym() {
  BuiltinExample ex;
  ex.name = "path4-asym";
  ex.description = "4-vertex path with weights (1, 1, 2), Omega = {2,3}, f = e^s";
  ex.graph = path_graph({1, 1, 2});
  ex.omega = {"2", "3"};
  ex.f = Nonlinearity::exponential();
  ex.expected = {
      {"lambda_star", 0.21659045811368950, 1e-5, "cross-check"},
      {"u_star[2]", 1.0926870700924424, 1e-4, "cross-check"},
      {"u_star[3]", 0.8935086975795924, 1e-4, "cross-check"},
      {"count@0.03", 4.0, 0.25, "cross-check"},
      {"count@0.09", 2.0, 0.25, "cross-check"},
  };
  return ex;
}

BuiltinExample path4_quartic() {
  BuiltinExample ex;
  ex.name = "path4-quartic";
  ex.description = "unit path4, non-convex quartic reaction";
  ex.graph = path_graph({1, 1, 1});
  ex.omega = {"2", "3"};
  ex.f = Nonlinearity::polynomial({1, 36, 24, -10, 1});
  ex.expected = {
      {"lambda_m", 0.5, 1e-12, "exact"},
      {"lambda_star", 0.016052871701660457, 1e-8, "cross-check"},
      {"u_star_norm", 5.1007955528930336, 1e-6, "cross-check"},
      {"u_star_norm", 5.1007955, 5e-3, "reference"},
      {"sweep_has_jump", 1.0, 0.25, "cross-check"},
  };
  return ex;
}

BuiltinExample path4_piecewise() {
  BuiltinExample ex;
  ex.name = "path4-piecewise";
  ex.description = "unit path4, convex C^1 piecewise reaction with a linear middle piece";
  ex.graph = path_graph({1, 1, 1});
  ex.omega = {"2", "3"};
  ex.f = Nonlinearity::piecewise({
      {0.0, {1, 0, 1}},    // s^2 + 1          on [0, 1)
      {1.0, {0, 2}},       // 2s               on [1, 2]
      {2.0, {4, -2, 1}},   // s^2 - 2s + 4     on (2, inf)
  });
  ex.expected = {
      {"lambda_m", 0.5, 1e-12, "exact"},
      {"lambda_star", 0.25, 2e-6, "exact"},
      {"minimal[2]@0.2", 0.5, 1e-9, "exact"},
  };
  return ex;
}

BuiltinExample path4_power2() {
  BuiltinExample ex;
  ex.name = "path4-power2";
  ex.description = "unit path4, f = (1+s)^2";
  ex.graph = path_graph({1, 1, 1});
  ex.omega = {"2", "3"};
  ex.f = Nonlinearity::power(2);
  ex.expected = {
      {"lambda_m", 0.5, 1e-12, "exact"},
      {"lambda_star", 0.125, 1e-6, "exact"},
      {"u_star[2]", 1.0, 1e-6, "exact"},
      {"minimal[2]@0.1", 0.38196601125010515, 1e-9, "exact"},
      {"upper[2]@0.1", 2.618033988749895, 1e-8, "exact"},
  };
  return ex;
}

BuiltinExample path4_affine() {
  BuiltinExample ex;
  ex.name = "path4-affine";
  ex.description = "unit path4, f = 1 + s (no extremal solution)";
  ex.graph = path_graph({1, 1, 1});
  ex.omega = {"2", "3"};
  ex.f = Nonlinearity::affine();
  ex.expected = {
      {"lambda_m", 0.5, 1e-12, "exact"},
      {"lambda_star", 0.5, 1e-3, "exact"},
      {"minimal[2]@0.3", 1.5, 1e-10, "exact"},
      {"extremal_absent", 1.0, 0.25, "exact"},
  };
  return ex;
}

BuiltinExample allen_cahn_ab(double a, double b) {
  BuiltinExample ex;
  ex.name = "allen-cahn-ab";
  ex.description = "path4 with weights (b, a, b), Allen-Cahn reaction s - s^3";
  ex.graph = path_graph({b, a, b});
  ex.omega = {"2", "3"};
  ex.f = Nonlinearity::allen_cahn();
  const double lm = b / (a + b);
  ex.expected = {
      {"lambda_m", lm, 1e-12, "exact"},
      {"mu1_zero@" + std::to_string(0.6 * lm), 0.4 * lm, 1e-9, "exact"},
      {"mu1_zero@" + std::to_string(1.5 * lm), -0.5 * lm, 1e-9, "exact"},
  };
  if (a == 1.0 && b == 1.0) {
    // nontrivial state at lambda = 1.5 lambda_m: sqrt(1 - lambda_m/lambda)
    ex.expected.push_back({"truncated_norm@0.75", 0.5773502691896258, 1e-8, "exact"});
  }
  return ex;
}

BuiltinExample regular_dirichlet(double k) {
  if (!(k > 1.0)) throw std::invalid_argument("regular-dirichlet: need k > 1");
  BuiltinExample ex;
  ex.name = "regular-dirichlet";
  ex.description = "unit triangle, each vertex tied to one Dirichlet hub with weight 2/(k-1)";
  const double spoke = 2.0 / (k - 1.0);
  std::vector<Edge> edges = {
      {"1", "2", 1}, {"2", "3", 1}, {"3", "1", 1},
      {"1", "0", spoke}, {"2", "0", spoke}, {"3", "0", spoke},
  };
  ex.graph = build_graph(edges);
  ex.omega = {"1", "2", "3"};
  ex.f = Nonlinearity::exponential();
  ex.expected = {
      {"lambda_m", 1.0 / k, 1e-12, "exact"},
      {"lambda_star", 1.0 / (k * M_E), 1e-6, "exact"},
  };
  if (k == 4.0)
    ex.expected.push_back({"minimal[1]@0.05", kW0_02, 1e-8, "exact"});  // -W0(-k lambda)
  return ex;
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"path4-exp",    "path4-weighted", "path3-exp",      "path5-exp",
          "khat-n",       "envelope",       "path4-asym",     "path4-quartic",
          "path4-piecewise", "path4-power2", "path4-affine",  "allen-cahn-ab",
          "regular-dirichlet"};
}

BuiltinExample make_builtin(const std::string& name_and_args) {
  const auto colon = name_and_args.find(':');
  const std::string name = name_and_args.substr(0, colon);
  std::vector<double> args;
  if (colon != std::string::npos) args = parse_args(name_and_args.substr(colon + 1));
  auto arg = [&args](std::size_t i, double dflt) { return i < args.size() ? args[i] : dflt; };

  if (name == "path4-exp") return path4_exp();
  if (name == "path4-weighted") return path4_weighted(arg(0, 2), arg(1, 3));
  if (name == "path3-exp") return path3_exp();
  if (name == "path5-exp") return path5_exp();
  if (name == "khat-n")
    return khat_n(arg(0, 1), arg(1, 1), arg(2, 0), static_cast<int>(arg(3, 5)));
  if (name == "envelope") return envelope_graph();
  if (name == "path4-asym") return path4_asym();
  if (name == "path4-quartic") return path4_quartic();
  if (name == "path4-piecewise") return path4_piecewise();
  if (name == "path4-power2") return path4_power2();
  if (name == "path4-affine") return path4_affine();
  if (name == "allen-cahn-ab") return allen_cahn_ab(arg(0, 1), arg(1, 1));
  if (name == "regular-dirichlet") return regular_dirichlet(arg(0, 4));
  throw std::invalid_argument("unknown builtin '" + name + "'");
}

std::vector<BuiltinExample> builtin_corpus() {
  std::vector<BuiltinExample> out;
  for (const auto& name : builtin_names()) out.push_back(make_builtin(name));
  return out;
}

}  // namespace gelfand
