#include "conestable/characters.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "conestable/gallery.hpp"
#include "conestable/serialize.hpp"

namespace conestable {

namespace {

struct FamilyInfo {
  CharacterFamily family;
  const char* id;
  const char* cone;
};

constexpr FamilyInfo kFamilies[] = {
    {CharacterFamily::kExpLinear, "exp-linear", "half-line-plus"},
    {CharacterFamily::kBelow, "below", "half-line-max"},
    {CharacterFamily::kAbove, "above", "half-line-min"},
    {CharacterFamily::kBox, "box", "coord-max"},
    {CharacterFamily::kExpPower, "exp-power", "power"},
    {CharacterFamily::kExpReciprocal, "exp-reciprocal", "harmonic"},
    {CharacterFamily::kExpSupport, "exp-support", "convex-body-2d"},
    {CharacterFamily::kExpMass, "exp-mass", "discrete-measure"},
};

const FamilyInfo& info(CharacterFamily family) {
  for (const auto& f : kFamilies) {
    if (f.family == family) return f;
  }
  throw std::invalid_argument("unknown character family");
}

CharacterFamily family_for_cone(const Cone& cone) {
  const std::string name = cone.name();
  for (const auto& f : kFamilies) {
    if (name == f.cone) return f.family;
  }
  throw std::invalid_argument("no character family for cone " + cone.id());
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> log_grid(double lo_exp, double step, std::size_t count) {
  std::vector<double> g;
  for (std::size_t k = 0; k < count; ++k) g.push_back(std::pow(10.0, lo_exp + step * static_cast<double>(k)));
  return g;
}

}  // namespace

std::string to_string(CharacterFamily family) { return info(family).id; }

CharacterFamily character_family_from_string(const std::string& name) {
  for (const auto& f : kFamilies) {
    if (name == f.id) return f.family;
  }
  throw std::invalid_argument("unknown character family '" + name + "'");
}

Character make_character(const Cone& cone, CharacterFamily family, std::vector<double> params) {
  if (family_for_cone(cone) != family) {
    throw std::invalid_argument("character family " + to_string(family) + " does not belong to " + cone.id());
  }
  const auto all_nonnegative = [&] {
    return std::all_of(params.begin(), params.end(), [](double v) { return v >= 0.0; });
  };
  switch (family) {
    case CharacterFamily::kExpLinear:
    case CharacterFamily::kBelow:
    case CharacterFamily::kAbove:
    case CharacterFamily::kExpReciprocal:
      if (params.size() != 1 || !all_nonnegative()) {
        throw std::invalid_argument(to_string(family) + ": expects one nonnegative parameter");
      }
      break;
    case CharacterFamily::kExpPower: {
      const auto* power = dynamic_cast<const PowerCone*>(&cone);
      const double beta = power ? power->beta() : 1.0;
      if (params.size() == 1) params.push_back(beta);
      if (params.size() != 2 || !(params[0] >= 0.0) || params[1] != beta) {
        throw std::invalid_argument("exp-power: expects {t} or {t, beta} matching the cone");
      }
      break;
    }
    case CharacterFamily::kBox:
    case CharacterFamily::kExpSupport:
    case CharacterFamily::kExpMass:
      if (params.size() != cone.element_size() || !all_nonnegative()) {
        throw std::invalid_argument(to_string(family) + ": expects " + std::to_string(cone.element_size()) +
                                    " nonnegative parameters");
      }
      break;
  }
  return {cone.id(), family, std::move(params)};
}

double eval(const Cone& cone, const Character& chi, const Element& x) {
  if (chi.cone_id != cone.id()) {
    throw std::invalid_argument("character for " + chi.cone_id + " evaluated on " + cone.id());
  }
  const auto& p = chi.params;
  switch (chi.family) {
    case CharacterFamily::kExpLinear: return std::exp(-p[0] * x[0]);
    case CharacterFamily::kBelow: return x[0] <= p[0] ? 1.0 : 0.0;
    case CharacterFamily::kAbove: return x[0] >= p[0] ? 1.0 : 0.0;
    case CharacterFamily::kBox:
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (x[i] > p[i]) return 0.0;
      }
      return 1.0;
    case CharacterFamily::kExpPower: return std::exp(-p[0] * std::pow(x[0], p[1]));
    case CharacterFamily::kExpReciprocal:
      if (p[0] == 0.0) return 1.0;
      return std::exp(-p[0] / x[0]);
    case CharacterFamily::kExpSupport:
    case CharacterFamily::kExpMass: return std::exp(-dot(p, x.values()));
  }
  throw std::logic_error("eval: unhandled family");
}

Character scale_char(double s, const Character& chi) {
  if (!(s > 0.0)) throw std::invalid_argument("scale_char: s must be positive");
  Character out = chi;
  auto& p = out.params;
  switch (chi.family) {
    case CharacterFamily::kExpLinear: p[0] *= s; break;
    case CharacterFamily::kBelow:
    case CharacterFamily::kAbove:
    case CharacterFamily::kExpReciprocal: p[0] /= s; break;
    case CharacterFamily::kBox:
      for (auto& z : p) z /= s;
      break;
    case CharacterFamily::kExpPower: p[0] *= std::pow(s, p[1]); break;
    case CharacterFamily::kExpSupport:
    case CharacterFamily::kExpMass:
      for (auto& v : p) v *= s;
      break;
  }
  return out;
}

std::vector<Character> probe_characters(const Cone& cone) {
  const CharacterFamily family = family_for_cone(cone);
  std::vector<Character> out;
  const auto scalar_probes = [&](std::initializer_list<double> values) {
    for (double v : values) out.push_back(make_character(cone, family, {v}));
  };
  switch (family) {
    case CharacterFamily::kExpLinear:
    case CharacterFamily::kExpPower:
    case CharacterFamily::kExpReciprocal: scalar_probes({0.1, 1.0, 10.0}); break;
    case CharacterFamily::kBelow: scalar_probes({0.5, 1.0, 2.0, 4.0}); break;
    case CharacterFamily::kAbove: scalar_probes({0.25, 1.0, 4.0}); break;
    case CharacterFamily::kBox: {
      const std::size_t d = cone.element_size();
      out.push_back(make_character(cone, family, std::vector<double>(d, 1.0)));
      out.push_back(make_character(cone, family, std::vector<double>(d, 4.0)));
      for (std::size_t i = 0; i < d; ++i) {
        std::vector<double> z(d, 1.0);
        z[i] = 4.0;
        out.push_back(make_character(cone, family, std::move(z)));
      }
      break;
    }
    case CharacterFamily::kExpSupport: {
      const std::size_t m = cone.element_size();
      for (std::size_t i : {std::size_t{0}, m / 4, m / 2}) {
        std::vector<double> nu(m, 0.0);
        nu[i] = 1.0;
        out.push_back(make_character(cone, family, std::move(nu)));
      }
      out.push_back(make_character(cone, family, std::vector<double>(m, 1.0 / static_cast<double>(m))));
      break;
    }
    case CharacterFamily::kExpMass: {
      const std::size_t g = cone.element_size();
      for (std::size_t i : {std::size_t{0}, g - 1}) {
        std::vector<double> u(g, 0.0);
        u[i] = 1.0;
        out.push_back(make_character(cone, family, std::move(u)));
      }
      out.push_back(make_character(cone, family, std::vector<double>(g, 1.0)));
      break;
    }
  }
  return out;
}

std::vector<Character> separating_probes(const Cone& cone) {
  const CharacterFamily family = family_for_cone(cone);
  std::vector<Character> out;
  const auto thresholds = log_grid(-3.0, 0.25, 25);
  switch (family) {
    case CharacterFamily::kBelow:
    case CharacterFamily::kAbove:
      for (double g : thresholds) out.push_back(make_character(cone, family, {g}));
      break;
    case CharacterFamily::kBox: {
      const std::size_t d = cone.element_size();
      for (std::size_t i = 0; i < d; ++i) {
        for (double g : thresholds) {
          std::vector<double> z(d, 1e300);
          z[i] = g;
          out.push_back(make_character(cone, family, std::move(z)));
        }
      }
      break;
    }
    case CharacterFamily::kExpLinear:
    case CharacterFamily::kExpReciprocal:
      for (double t : log_grid(-4.0, 1.0, 9)) out.push_back(make_character(cone, family, {t}));
      break;
    case CharacterFamily::kExpPower:
      for (double t : log_grid(-12.0, 1.0, 13)) out.push_back(make_character(cone, family, {t}));
      break;
    case CharacterFamily::kExpSupport:
    case CharacterFamily::kExpMass: {
      const std::size_t m = cone.element_size();
      for (double w : {1e-3, 1.0}) {
        for (std::size_t i = 0; i < m; ++i) {
          std::vector<double> v(m, 0.0);
          v[i] = w;
          out.push_back(make_character(cone, family, std::move(v)));
        }
      }
      break;
    }
  }
  return out;
}

LaplaceEstimate empirical_laplace(const Cone& cone, std::span<const Element> samples, const Character& chi) {
  if (samples.size() < 2) throw std::invalid_argument("empirical_laplace: need at least 2 samples");
  LaplaceEstimate est;
  est.character = chi;
  est.n = samples.size();
  // Welford.
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t k = 0;
  for (const auto& x : samples) {
    const double v = eval(cone, chi, x);
    ++k;
    const double delta = v - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (v - mean);
  }
  const double n = static_cast<double>(est.n);
  est.mean = mean;
  est.standard_error = std::sqrt(m2 / (n - 1.0) / n);
  if (mean <= 0.0) {
    est.mean = 0.0;
    est.exponent = kInfinity;
    est.degenerate = true;
  } else {
    est.exponent = 0.0 - std::log(std::min(mean, 1.0));
  }
  return est;
}

AlphaFit estimate_alpha(const Cone& cone, std::span<const Element> samples, const Character& chi,
                        std::span<const double> s_grid) {
  if (s_grid.size() < 3) throw std::invalid_argument("estimate_alpha: need at least 3 grid scales");
  AlphaFit fit;
  std::vector<double> xs, ys, vars;
  for (double s : s_grid) {
    auto est = empirical_laplace(cone, samples, scale_char(s, chi));
    if (!(est.exponent > 0.0) || !std::isfinite(est.exponent)) {
      throw std::domain_error("estimate_alpha: degenerate Laplace exponent " + format_double(est.exponent) +
                              " at s=" + format_double(s));
    }
    const double se_log = est.standard_error / (est.mean * est.exponent);
    xs.push_back(std::log(s));
    ys.push_back(std::log(est.exponent));
    vars.push_back(se_log * se_log);
    fit.scales.push_back(s);
    fit.log_exponent_se.push_back(se_log);
    fit.estimates.push_back(std::move(est));
  }
  const bool weighted = std::all_of(vars.begin(), vars.end(), [](double v) { return v > 0.0; });
  std::vector<double> w(xs.size(), 1.0);
  if (weighted) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 / vars[i];
  }
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sw += w[i];
    sx += w[i] * xs[i];
    sy += w[i] * ys[i];
  }
  const double xbar = sx / sw;
  const double ybar = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += w[i] * (xs[i] - xbar) * (xs[i] - xbar);
    sxy += w[i] * (xs[i] - xbar) * (ys[i] - ybar);
  }
  fit.alpha = sxy / sxx;
  fit.intercept = ybar - fit.alpha * xbar;
  fit.alpha_standard_error = weighted ? std::sqrt(1.0 / sxx) : 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    fit.residuals.push_back(ys[i] - (fit.intercept + fit.alpha * xs[i]));
  }
  return fit;
}

std::string to_csv_row(const Character& chi) {
  std::string out = to_string(chi.family);
  for (double p : chi.params) out += "," + format_double(p);
  return out;
}

std::string to_csv_row(const LaplaceEstimate& est) {
  std::string params;
  for (std::size_t i = 0; i < est.character.params.size(); ++i) {
    if (i) params += ';';
    params += format_double(est.character.params[i]);
  }
  return to_string(est.character.family) + "," + params + "," + std::to_string(est.n) + "," +
         format_double(est.mean) + "," + format_double(est.standard_error) + "," + format_double(est.exponent);
}

}  // namespace conestable
