#include "sos_cones/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <tuple>

#include "sos_cones/errors.hpp"

namespace sos_cones {

namespace {

constexpr std::uint64_t kPolySeedSalt = 0x9e3779b97f4a7c15ULL;
constexpr int kPointRetries = 10;

std::shared_ptr<const WeightList> share(WeightList w) {
  return std::make_shared<const WeightList>(std::move(w));
}

void append_cone(PrimalForm& form, std::shared_ptr<const ConeOracle> cone) {
  Index offset = 0;
  for (const auto& blk : form.cones) offset += blk.cone->dim();
  form.cones.push_back({std::move(cone), offset});
}

// v = q_1 (U variables); the cone sees (q_1, q_2, ..., q_m).
PrimalForm vector_form(const EnvelopeInstance& inst, std::unique_ptr<ConeOracle> cone) {
  const Index num_u = inst.U();
  const Index m = inst.m;
  PrimalForm f;
  f.B = MatrixXd::Zero(num_u * m, num_u);
  f.B.topRows(num_u).setIdentity();
  f.offset = VectorXd::Zero(num_u * m);
  for (Index i = 1; i < m; ++i) f.offset.segment(i * num_u, num_u) = inst.polys.values.col(i - 1);
  f.scale = VectorXd::Ones(num_u * m);
  f.obj = inst.basis->quad();
  append_cone(f, std::move(cone));
  return f;
}

// Arrow matrix of (q_1, ..., q_m) as a symmetric polynomial matrix.
PrimalForm psd_form(const EnvelopeInstance& inst) {
  const Index num_u = inst.U();
  const Index m = inst.m;
  const Index dim = num_u * sdim(m);
  PrimalForm f;
  f.B = MatrixXd::Zero(dim, num_u);
  f.offset = VectorXd::Zero(dim);
  f.scale = VectorXd::Constant(dim, 2.0);
  for (Index i = 0; i < m; ++i) {
    const Index slot = tri_index(m, i, i) * num_u;
    f.B.block(slot, 0, num_u, num_u).setIdentity();
    f.scale.segment(slot, num_u).setOnes();
  }
  for (Index i = 1; i < m; ++i)
    f.offset.segment(tri_index(m, i, 0) * num_u, num_u) = inst.polys.values.col(i - 1);
  f.obj = inst.basis->quad();
  append_cone(f, make_wsos_psd(share(inst.basis->weights()), m));
  return f;
}

// y^T arrow(q)(x) y at the product points: q_1 at y = e_i, and
// 2 q_1 + 2 arrow_ij at y = e_i + e_j.
PrimalForm product_form(const EnvelopeInstance& inst) {
  const Index num_u = inst.U();
  const Index m = inst.m;
  const Index dim = num_u * sdim(m);
  PrimalForm f;
  f.B = MatrixXd::Zero(dim, num_u);
  f.offset = VectorXd::Zero(dim);
  f.scale = VectorXd::Ones(dim);
  for (Index j = 0; j < m; ++j) {
    for (Index i = j; i < m; ++i) {
      const Index slot = tri_index(m, i, j) * num_u;
      f.B.block(slot, 0, num_u, num_u).diagonal().setConstant(i == j ? 1.0 : 2.0);
      if (j == 0 && i > 0) f.offset.segment(slot, num_u) = 2.0 * inst.polys.values.col(i - 1);
    }
  }
  f.obj = inst.basis->quad();
  append_cone(f, make_wsos(share(product_weights(inst.basis->weights(), m))));
  return f;
}

// q_i = g_i - h_i with g_i, h_i and q_1 - sum (g_i + h_i) all WSOS; h_i is
// substituted out, leaving v = (q_1, g_2, ..., g_m).
PrimalForm extended_form(const EnvelopeInstance& inst) {
  const Index num_u = inst.U();
  const Index m = inst.m;
  const Index tail = m - 1;
  PrimalForm f;
  const Index rows = num_u * (2 * m - 1);
  f.B = MatrixXd::Zero(rows, num_u * m);
  f.offset = VectorXd::Zero(rows);
  f.scale = VectorXd::Ones(rows);
  f.obj = VectorXd::Zero(num_u * m);
  f.obj.head(num_u) = inst.basis->quad();
  const MatrixXd eye = MatrixXd::Identity(num_u, num_u);

  f.B.block(0, 0, num_u, num_u) = eye;
  for (Index i = 0; i < tail; ++i) {
    const Index var = (1 + i) * num_u;
    const auto fi = inst.polys.values.col(i);
    f.B.block(0, var, num_u, num_u) = -2.0 * eye;
    f.offset.head(num_u) += fi;
    f.B.block((1 + i) * num_u, var, num_u, num_u) = eye;
    f.B.block((1 + tail + i) * num_u, var, num_u, num_u) = eye;
    f.offset.segment((1 + tail + i) * num_u, num_u) = -fi;
  }
  const auto weights = share(inst.basis->weights());
  for (Index k = 0; k < 2 * m - 1; ++k) append_cone(f, make_wsos(weights));
  return f;
}

FormulationDims dims_of(const ConicProblem& conic) {
  FormulationDims d;
  d.cone_dim = conic.num_vars();
  d.num_cones = static_cast<Index>(conic.cones.size());
  d.equalities = conic.num_eqs();
  d.nu = conic.nu();
  return d;
}

}  // namespace

std::string_view formulation_name(Formulation f) {
  switch (f) {
    case Formulation::kSosL2: return "sosl2";
    case Formulation::kSos: return "sos";
    case Formulation::kSosPsd: return "sospsd";
    case Formulation::kSosL1: return "sosl1";
    case Formulation::kSosExt: return "sos_ext";
  }
  return "unknown";
}

std::optional<Formulation> parse_formulation(std::string_view name) {
  for (Formulation f : {Formulation::kSosL2, Formulation::kSos, Formulation::kSosPsd,
                        Formulation::kSosL1, Formulation::kSosExt})
    if (formulation_name(f) == name) return f;
  return std::nullopt;
}

int formulation_norm(Formulation f) {
  return (f == Formulation::kSosL1 || f == Formulation::kSosExt) ? 1 : 2;
}

RandomPolys random_polys(const BasisContext& basis, int d_r, Index m, std::uint64_t seed,
                         bool zero) {
  if (m < 2) throw ShapeMismatch("random_polys: need m >= 2");
  if (d_r < 1 || 2 * d_r > 2 * basis.d()) throw ShapeMismatch("random_polys: degree exceeds basis");
  const Index terms = binomial(basis.n() + 2 * d_r, basis.n());
  RandomPolys out;
  out.coeffs = MatrixXd::Zero(terms, m - 1);
  if (!zero) {
    std::mt19937_64 rng(seed ^ kPolySeedSalt);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (Index i = 0; i < m - 1; ++i)
      for (Index t = 0; t < terms; ++t) out.coeffs(t, i) = unif(rng);
  }
  out.values = chebyshev_vandermonde(basis.n(), 2 * d_r, basis.points()) * out.coeffs;
  return out;
}

EnvelopeInstance make_instance(int n, int d_r, Index m, int p, int d, std::uint64_t seed,
                               bool zero_polys) {
  if (n < 1 || d_r < 1 || m < 2) throw ShapeMismatch("envelope instance needs n, d_r >= 1 and m >= 2");
  if (p != 1 && p != 2) throw FormulationMismatch("envelope norm p must be 1 or 2");
  if (d == 0) d = d_r;
  if (p == 1 && d != d_r) throw FormulationMismatch("p = 1 requires d = d_r");
  if (p == 2 && d != d_r && d != 2 * d_r) throw FormulationMismatch("p = 2 requires d in {d_r, 2 d_r}");

  EnvelopeInstance inst;
  inst.n = n;
  inst.d_r = d_r;
  inst.d = d;
  inst.m = m;
  inst.p = p;
  inst.seed = seed;
  inst.zero_polys = zero_polys;
  for (int attempt = 0;; ++attempt) {
    try {
      inst.basis = std::make_shared<const BasisContext>(BasisContext::build(n, d, seed + attempt));
      break;
    } catch (const DegeneratePoints&) {
      if (attempt + 1 >= kPointRetries) throw;
    }
  }
  inst.polys = random_polys(*inst.basis, d_r, m, seed, zero_polys);
  return inst;
}

ConicProblem dualize(const PrimalForm& primal) {
  const Index rows = primal.B.rows();
  if (primal.offset.size() != rows || primal.scale.size() != rows ||
      primal.obj.size() != primal.B.cols())
    throw ShapeMismatch("dualize: inconsistent primal data");
  ConicProblem conic;
  conic.c = primal.scale.cwiseProduct(primal.offset);
  conic.A = primal.B.transpose() * primal.scale.asDiagonal();
  conic.b = primal.obj;
  conic.cones = primal.cones;
  return conic;
}

VectorXd recover_primal(const SolveResult& result) { return -result.y; }

WeightList product_weights(const WeightList& weights, Index m) {
  // Rows t_v of Y: e_i on the diagonal of the triangle, e_i + e_j off it.
  MatrixXd y = MatrixXd::Zero(sdim(m), m);
  for (Index j = 0; j < m; ++j)
    for (Index i = j; i < m; ++i) {
      y(tri_index(m, i, j), i) = 1.0;
      y(tri_index(m, i, j), j) = 1.0;
    }
  WeightList out;
  for (const auto& w : weights) {
    const Index num_u = w.values.size();
    WeightRecord rec;
    rec.cols = w.cols * m;
    rec.values = w.values.replicate(sdim(m), 1);
    rec.p.resize(num_u * sdim(m), rec.cols);
    for (Index v = 0; v < sdim(m); ++v)
      for (Index i = 0; i < m; ++i)
        rec.p.block(v * num_u, i * w.cols, num_u, w.cols) = y(v, i) * w.p;
    out.push_back(std::move(rec));
  }
  return out;
}

BuiltProblem build(const EnvelopeInstance& inst, Formulation f) {
  if (formulation_norm(f) != inst.p)
    throw FormulationMismatch(std::string(formulation_name(f)) + " does not certify the p = " +
                              std::to_string(inst.p) + " envelope");
  BuiltProblem out;
  switch (f) {
    case Formulation::kSosL2:
      out.primal = vector_form(inst, make_wsos_l2(share(inst.basis->weights()), inst.m));
      break;
    case Formulation::kSosL1:
      out.primal = vector_form(inst, make_wsos_l1(share(inst.basis->weights()), inst.m));
      break;
    case Formulation::kSosPsd: out.primal = psd_form(inst); break;
    case Formulation::kSos: out.primal = product_form(inst); break;
    case Formulation::kSosExt: out.primal = extended_form(inst); break;
  }
  out.conic = dualize(out.primal);
  out.dims = dims_of(out.conic);
  if (f == Formulation::kSosExt) {
    out.dims.aux_equalities = inst.U() * (inst.m - 1);
    out.dims.aux_variables = 2 * inst.U() * (inst.m - 1);
  }
  return out;
}

BuiltProblem build_separation(const BasisContext& basis, const MatrixXd& q, bool arrow_psd) {
  const Index num_u = basis.U();
  const Index m = q.cols();
  if (q.rows() != num_u || m < 2) throw ShapeMismatch("build_separation: q must be U x m, m >= 2");
  const auto weights = share(basis.weights());
  PrimalForm f;
  f.obj = VectorXd::Ones(1);
  if (arrow_psd) {
    const PolyMat arrow = arrow_embed(PolyVec{q});
    const Index dim = num_u * sdim(m);
    f.offset = Eigen::Map<const VectorXd>(arrow.coeffs.data(), dim);
    f.B = MatrixXd::Zero(dim, 1);
    f.scale = VectorXd::Constant(dim, 2.0);
    for (Index i = 0; i < m; ++i) {
      f.B.col(0).segment(tri_index(m, i, i) * num_u, num_u).setOnes();
      f.scale.segment(tri_index(m, i, i) * num_u, num_u).setOnes();
    }
    append_cone(f, make_wsos_psd(weights, m));
  } else {
    f.offset = Eigen::Map<const VectorXd>(q.data(), num_u * m);
    f.B = MatrixXd::Zero(num_u * m, 1);
    f.B.col(0).head(num_u).setOnes();
    f.scale = VectorXd::Ones(num_u * m);
    append_cone(f, make_wsos_l2(weights, m));
  }
  BuiltProblem out;
  out.primal = std::move(f);
  out.conic = dualize(out.primal);
  out.dims = dims_of(out.conic);
  return out;
}

ResultRow run_instance(const EnvelopeInstance& inst, Formulation f, const SolveOptions& options) {
  ResultRow row;
  row.n = inst.n;
  row.d_r = inst.d_r;
  row.m = inst.m;
  row.d = inst.d;
  row.p = inst.p;
  row.seed = inst.seed;
  row.formulation = std::string(formulation_name(f));
  const BuiltProblem built = build(inst, f);
  row.dims = built.dims;
  const SolveResult res = solve(built.conic, options);
  row.st = std::string(status_code(res.status));
  row.iter = res.iterations;
  row.time = res.wall_time;
  row.obj = -res.primal_obj;
  row.detail = res.detail;
  if (res.y.size() > 0) row.envelope = recover_primal(res).head(inst.U());
  return row;
}

namespace {

VectorXd interpolation_coeffs(const BasisContext& basis, const VectorXd& values) {
  const MatrixXd v = chebyshev_vandermonde(basis.n(), 2 * basis.d(), basis.points());
  return v.partialPivLu().solve(values);
}

}  // namespace

double interpolate(const BasisContext& basis, const VectorXd& values, const VectorXd& x) {
  return chebyshev_basis_eval(basis.n(), 2 * basis.d(), x).dot(interpolation_coeffs(basis, values));
}

double eval_random_poly(const EnvelopeInstance& inst, Index column, const VectorXd& x) {
  return chebyshev_basis_eval(inst.n, 2 * inst.d_r, x).dot(inst.polys.coeffs.col(column));
}

double envelope_violation(const EnvelopeInstance& inst, const VectorXd& envelope, int samples,
                          double slack, std::uint64_t seed) {
  if (envelope.size() != inst.U()) throw ShapeMismatch("envelope_violation: need U values");
  const VectorXd c1 = interpolation_coeffs(*inst.basis, envelope);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  MatrixXd pts(samples, inst.n);
  for (int s = 0; s < samples; ++s)
    for (int k = 0; k < inst.n; ++k) pts(s, k) = unif(rng);
  const VectorXd q1 = chebyshev_vandermonde(inst.n, 2 * inst.d, pts) * c1;
  const MatrixXd rest = chebyshev_vandermonde(inst.n, 2 * inst.d_r, pts) * inst.polys.coeffs;
  double worst = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const double norm = inst.p == 1 ? rest.row(s).lpNorm<1>() : rest.row(s).norm();
    worst = std::max(worst, norm - q1(s) - slack * (1.0 + std::abs(q1(s))));
  }
  return worst;
}

std::string markdown_table(const std::vector<ResultRow>& rows) {
  using Key = std::tuple<int, int, Index, int, int, std::uint64_t>;
  std::vector<Key> order;
  std::map<Key, std::map<std::string, const ResultRow*>> groups;
  std::vector<std::string> forms;
  for (const auto& r : rows) {
    const Key k{r.n, r.d_r, r.m, r.d, r.p, r.seed};
    if (!groups.count(k)) order.push_back(k);
    groups[k][r.formulation] = &r;
    if (std::find(forms.begin(), forms.end(), r.formulation) == forms.end())
      forms.push_back(r.formulation);
  }
  const bool has_ratio = std::find(forms.begin(), forms.end(), "sosl2") != forms.end();

  std::ostringstream os;
  os << "| n | d_r | m | d | seed |";
  for (const auto& f : forms) os << ' ' << f << " st | " << f << " iter | " << f << " time |";
  if (has_ratio) os << " obj |";
  os << "\n|";
  const std::size_t cols = 5 + 3 * forms.size() + (has_ratio ? 1 : 0);
  for (std::size_t i = 0; i < cols; ++i) os << "---|";
  os << '\n';
  char buf[64];
  for (const auto& k : order) {
    const auto& g = groups[k];
    os << "| " << std::get<0>(k) << " | " << std::get<1>(k) << " | " << std::get<2>(k) << " | "
       << std::get<3>(k) << " | " << std::get<5>(k) << " |";
    for (const auto& f : forms) {
      const auto it = g.find(f);
      if (it == g.end()) {
        os << " - | - | - |";
        continue;
      }
      std::snprintf(buf, sizeof buf, "%.2f", it->second->time);
      os << ' ' << it->second->st << " | " << it->second->iter << " | " << buf << " |";
    }
    if (has_ratio) {
      const auto l2 = g.find("sosl2");
      const ResultRow* ref = nullptr;
      for (const char* name : {"sos", "sospsd"}) {
        const auto it = g.find(name);
        if (it != g.end() && it->second->st == "co") {
          ref = it->second;
          break;
        }
      }
      if (l2 != g.end() && ref && l2->second->st == "co" && l2->second->obj != 0.0) {
        std::snprintf(buf, sizeof buf, "%.4f", ref->obj / l2->second->obj);
        os << ' ' << buf << " |";
      } else {
        os << " - |";
      }
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace sos_cones
