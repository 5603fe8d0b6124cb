#include "mixnl/pipeline.hpp"

#include "mixnl/error.hpp"
#include "mixnl/problem.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace mixnl {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// JSON has no infinity; report it as null.
json finite_or_null(double v)
{
  return std::isfinite(v) ? json(v) : json(nullptr);
}

std::string g17(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double max_asymmetry(const Eigen::MatrixXd& a)
{
  const double scale = a.cwiseAbs().maxCoeff();
  return scale > 0.0 ? (a - a.transpose()).cwiseAbs().maxCoeff() / scale : 0.0;
}

// max |v_j - mean| / max |v_j| over Omega-nodes.
double constant_deviation(const Mesh1D& mesh, const Eigen::VectorXd& v)
{
  const Eigen::VectorXd inner = mesh.interior_values(v);
  const double top = inner.cwiseAbs().maxCoeff();
  if (top == 0.0)
    return std::numeric_limits<double>::infinity();
  return (inner.array() - inner.mean()).abs().maxCoeff() / top;
}

json measure_json(const SpectralMeasure& mu, double alpha)
{
  json atoms = json::array();
  for (const Atom& a : mu.atoms())
    atoms.push_back({a.order, a.weight});
  const OrderBookkeeping bk = s_sharp(mu, alpha);
  return {{"atoms", atoms},
          {"mass", mu.mass()},
          {"s_sharp", bk.s_sharp},
          {"critical_exponent", finite_or_null(bk.critical_exponent)}};
}

json sphere_json(const std::vector<SphereSample>& spheres)
{
  json out = json::array();
  for (const SphereSample& s : spheres)
    out.push_back({{"rho", s.rho}, {"min_energy", s.min_energy}});
  return out;
}

EigenOptions eigen_options(const RunConfig& c)
{
  EigenOptions o;
  o.method = c.solver.eig_method == "regularized" ? EigenMethod::regularized : EigenMethod::schur;
  return o;
}

void ensure_dir(const std::string& dir)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw Error("cannot create directory " + dir + ": " + ec.message());
}

std::string path_in(const std::string& dir, const std::string& name)
{
  return (std::filesystem::path(dir) / name).string();
}

} // namespace

AssembledSystem assemble_system(const RunConfig& config)
{
  config.validate();
  const auto t0 = Clock::now();
  AssembledSystem sys{build_mesh(config.omega(), config.collar_R, config.n_in, config.n_ext),
                      config.measure.build(),
                      {},
                      0.0};
  sys.mats = assemble_operators(sys.mesh, sys.measure, config.alpha, config.quad);
  sys.seconds = seconds_since(t0);
  return sys;
}

Branch select_branch(double lambda)
{
  return lambda < 1.0 ? Branch::mountain_pass : Branch::linking;
}

const char* to_string(Branch branch)
{
  return branch == Branch::mountain_pass ? "mountain_pass" : "linking";
}

const char* to_string(Stage stage)
{
  switch (stage) {
  case Stage::assemble: return "assemble";
  case Stage::eigs: return "eigs";
  case Stage::geometry: return "verify-geometry";
  case Stage::solve_mp: return "solve-mp";
  case Stage::solve_link: return "solve-link";
  case Stage::verify_paper: return "verify-paper";
  case Stage::full: return "run";
  }
  return "unknown";
}

json to_json(const RunConfig& c)
{
  json atoms = json::array();
  for (const Atom& a : c.measure.atoms)
    atoms.push_back({a.order, a.weight});
  json j = {{"omega", {c.omega_left, c.omega_right}},
            {"collar_R", c.collar_R},
            {"n_in", c.n_in},
            {"n_ext", c.n_ext},
            {"alpha", c.alpha},
            {"lambda", c.lambda},
            {"seed", c.seed},
            {"output", c.output},
            {"atoms", atoms},
            {"nonlinearity", {{"kind", c.nonlinearity.kind}, {"a", c.nonlinearity.a}, {"p", c.nonlinearity.p}}},
            {"quad",
             {{"subdiv", c.quad.near_singular_subdivisions},
              {"order", c.quad.far_field_order},
              {"tol", c.quad.tolerance}}},
            {"solver",
             {{"tol", c.solver.tol},
              {"max_iter", c.solver.max_iter},
              {"path_points", c.solver.path_points},
              {"seeds", c.solver.seeds},
              {"directions", c.solver.directions},
              {"eig_count", c.solver.eig_count},
              {"eig_method", c.solver.eig_method}}}};
  if (c.measure.density)
    j["density"] = {{"kind", c.measure.density->kind},
                    {"params", c.measure.density->params},
                    {"nodes", c.measure.density->nodes}};
  return j;
}

json to_json(const ARReport& r)
{
  static const char* names[5] = {"AR1", "AR2", "AR3", "AR4", "AR5"};
  json hyp = json::object();
  for (int k = 0; k < 5; ++k) {
    const HypothesisCheck& h = r.ar[k];
    hyp[names[k]] = {{"holds", h.holds},
                     {"witness_t", h.witness_t},
                     {"witness_x", h.witness_x},
                     {"worst_violation", h.worst_violation},
                     {"detail", h.detail}};
  }
  json sv = json::array();
  for (const SV12Result& s : r.sv12)
    sv.push_back(to_json(s));
  const GrowthConstants& c = r.constants;
  return {{"holds", r.all_hold()},
          {"constants",
           {{"a1", c.a1}, {"a2", c.a2}, {"p", c.p}, {"theta", c.theta}, {"r", c.r},
            {"theta_tilde", c.theta_tilde}, {"a3", c.a3}, {"a4", c.a4}}},
          {"hypotheses", hyp},
          {"grid",
           {{"samples", r.grid.samples},
            {"t_max", r.grid.t_max},
            {"t_min_positive", r.grid.t_min_positive},
            {"x_samples", r.grid.x_samples.size()}}},
          {"sv12", sv}};
}

json to_json(const SV12Result& s)
{
  return {{"eps", s.eps}, {"delta", s.delta}, {"certified", s.certified},
          {"witness_t", s.witness_t}, {"detail", s.detail}};
}

json to_json(const MPGeometry& g)
{
  return {{"kind", "mountain_pass"},
          {"rho", g.rho},
          {"beta", g.beta},
          {"e_norm", g.e_norm},
          {"e_energy", g.e_energy},
          {"directions", g.directions},
          {"seed", g.seed},
          {"spheres", sphere_json(g.spheres)},
          {"certified", g.beta > 0.0 && g.e_energy < 0.0 && g.e_norm > g.rho}};
}

json to_json(const LinkingGeometry& g)
{
  return {{"kind", "linking"},
          {"index", g.index},
          {"rho", g.rho},
          {"beta", g.beta},
          {"R", g.radius},
          {"max_energy_bottom", g.max_bottom},
          {"max_energy_top", g.max_top},
          {"max_energy_lateral", g.max_lateral},
          {"sphere_samples", g.sphere_samples},
          {"face_samples", g.face_samples},
          {"seed", g.seed},
          {"spheres", sphere_json(g.spheres)},
          {"certified", g.beta > 0.0}};
}

json to_json(const Solution& s)
{
  return {{"level", s.level},
          {"residual", s.residual},
          {"anorm", s.norm},
          {"iterations", s.iterations}};
}

json to_json(const ExampleReport& r)
{
  json claims = json::array();
  for (const ClaimCheck& c : r.claims)
    claims.push_back({{"claim", c.claim},
                      {"value", c.value},
                      {"relation", c.relation},
                      {"threshold", c.threshold},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass}});
  return {{"name", r.name}, {"passed", r.passed()}, {"claims", claims}};
}

std::string eigs_csv(const EigenDecomposition& d, int count, const Mesh1D* mesh)
{
  count = std::min(count, d.size());
  std::ostringstream os;
  os << "k,lambda_tilde,lambda";
  if (mesh)
    for (int i = 0; i < mesh->num_nodes(); ++i)
      os << ",x" << i;
  os << '\n';
  if (mesh) {
    os << "x,,";
    for (int i = 0; i < mesh->num_nodes(); ++i)
      os << ',' << g17(mesh->node(i));
    os << '\n';
  }
  for (int k = 0; k < count; ++k) {
    os << k + 1 << ',' << g17(d.lambdas_tilde[k]) << ',' << g17(d.lambda(k));
    if (mesh)
      for (int i = 0; i < mesh->num_nodes(); ++i)
        os << ',' << g17(d.vectors(i, k));
    os << '\n';
  }
  return os.str();
}

std::string solution_csv(const Mesh1D& mesh, const Eigen::VectorXd& u)
{
  std::ostringstream os;
  os << "node,x,u,interior\n";
  for (int i = 0; i < mesh.num_nodes(); ++i)
    os << i << ',' << g17(mesh.node(i)) << ',' << g17(u[i]) << ','
       << (mesh.is_interior_node(i) ? 1 : 0) << '\n';
  return os.str();
}

std::string trace_csv(const std::vector<SaddleTraceRecord>& trace)
{
  std::ostringstream os;
  os << "step,iteration,phase,energy,residual\n";
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const SaddleTraceRecord& r = trace[k];
    os << k << ',' << r.iteration << ',' << r.phase << ',' << g17(r.path_max) << ','
       << g17(r.residual) << '\n';
  }
  return os.str();
}

void write_text(const std::string& path, const std::string& body)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("cannot write " + path);
  out << body;
}

void write_coo(const std::string& path, const Eigen::MatrixXd& a)
{
  std::ostringstream os;
  os << "# rows " << a.rows() << " cols " << a.cols() << '\n';
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0.0)
        os << i << ' ' << j << ' ' << g17(a(i, j)) << '\n';
  write_text(path, os.str());
}

namespace {

// Runs the stages up to `stage`; `current` tracks the stage for error reports.
void execute(const RunConfig& config, Stage stage, const RunOptions& options, json& rep,
             json& timings, bool& ok, std::string& current)
{
  config.validate();
  if (options.write_files)
    ensure_dir(config.output);

  current = "assemble";
  const AssembledSystem sys = assemble_system(config);
  timings["assemble"] = sys.seconds;
  const OperatorMatrices& m = sys.mats;
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.size());
  const double bscale = std::max(m.gagliardo.cwiseAbs().maxCoeff(), 1e-300);
  rep["mesh"] = {{"nodes", sys.mesh.num_nodes()},
                 {"n_in", sys.mesh.n_in()},
                 {"n_ext", sys.mesh.n_ext()},
                 {"collar_R", sys.mesh.collar_radius()},
                 {"left_grading", sys.mesh.left_grading()},
                 {"right_grading", sys.mesh.right_grading()}};
  rep["measure"] = measure_json(sys.measure, config.alpha);
  rep["matrices"] = {
      {"asymmetry_mass", max_asymmetry(m.mass)},
      {"asymmetry_stiffness", max_asymmetry(m.stiffness)},
      {"asymmetry_gagliardo", max_asymmetry(m.gagliardo)},
      {"kernel_residual_relative", ((m.stiffness + m.gagliardo) * ones).cwiseAbs().maxCoeff() / bscale},
      {"mass_of_one", ones.dot(m.mass * ones)}};
  if (options.dump_matrices) {
    ensure_dir(*options.dump_matrices);
    write_coo(path_in(*options.dump_matrices, "mass.coo"), m.mass);
    write_coo(path_in(*options.dump_matrices, "stiffness.coo"), m.stiffness);
    write_coo(path_in(*options.dump_matrices, "gagliardo.coo"), m.gagliardo);
  }
  if (stage == Stage::assemble)
    return;

  {
    current = "eigs";
    auto t0 = Clock::now();
    const EigenDecomposition decomp =
        solve_eigen(m, static_cast<int>(m.interior_dofs.size()), eigen_options(config));
    timings["eigs"] = seconds_since(t0);
    const double l1 = decomp.lambdas_tilde[0];
    const double l2 = decomp.lambdas_tilde[1];
    const double dev = constant_deviation(sys.mesh, decomp.vector(0));
    const bool first_ok = std::abs(l1) <= 1e-8 * std::max(1.0, l2) && dev <= 1e-6;
    json table = json::array();
    for (int k = 0; k < std::min(config.solver.eig_count, decomp.size()); ++k)
      table.push_back({{"k", k + 1}, {"lambda_tilde", decomp.lambdas_tilde[k]}, {"lambda", decomp.lambda(k)}});
    json clusters = json::array();
    for (const auto& [a, b] : decomp.clusters)
      if (b - a > 1)
        clusters.push_back({a + 1, b});
    rep["eigen"] = {{"method", config.solver.eig_method},
                    {"table", table},
                    {"lambda_tilde_1", l1},
                    {"lambda_1", decomp.lambda(0)},
                    {"e1_constant_deviation", dev},
                    {"first_eigenvalue_ok", first_ok},
                    {"clusters", clusters}};
    ok = ok && first_ok;
    if (options.write_files)
      write_text(path_in(config.output, "eigs.csv"),
                 eigs_csv(decomp, config.solver.eig_count, options.eigenvectors ? &sys.mesh : nullptr));
    if (stage == Stage::eigs)
      return;

    current = "nonlinearity";
    const Problem problem(sys.mesh, sys.measure, sys.mats, config.lambda, config.nonlinearity.build());
    const std::vector<double> grid = default_t_grid();
    std::vector<double> xs;
    for (int i = sys.mesh.first_interior(); i <= sys.mesh.last_interior(); ++i)
      xs.push_back(sys.mesh.node(i));
    ARReport ar = check_ar(problem.source(), problem.bookkeeping(), grid, xs);
    for (double eps : {0.1, 1.0, 10.0})
      ar.sv12.push_back(sv12_check(problem.source(), eps, ar.constants.p, grid, xs));
    rep["ar"] = to_json(ar);
    ok = ok && ar.all_hold();

    Branch branch = select_branch(config.lambda);
    if (stage == Stage::solve_mp)
      branch = Branch::mountain_pass;
    if (stage == Stage::solve_link)
      branch = Branch::linking;
    rep["branch"] = to_string(branch);

    if (branch == Branch::mountain_pass) {
      current = "geometry";
      t0 = Clock::now();
      MPGeometryOptions gopt;
      gopt.directions = config.solver.directions;
      gopt.seed = config.seed;
      const MPGeometry geo = verify_mp_geometry(problem, gopt);
      timings["geometry"] = seconds_since(t0);
      rep["certificate"] = to_json(geo);
      if (stage == Stage::geometry)
        return;

      current = "solve";
      t0 = Clock::now();
      MPOptions mopt;
      mopt.tol = config.solver.tol;
      mopt.max_iter = config.solver.max_iter;
      mopt.path_points = config.solver.path_points;
      const MPResult res = solve_mountain_pass(problem, geo, mopt);
      timings["solve"] = seconds_since(t0);
      const Solution& s = res.solution;
      json js = to_json(s);
      js["path_max"] = res.path_max;
      js["level_at_least_beta"] = s.level >= geo.beta - mopt.tol;
      js["nontrivial"] = s.norm >= mopt.nontrivial_floor;
      if (config.lambda < 1.0) {
        const double a = config.nonlinearity.a;
        const double pp = config.nonlinearity.p;
        const double c = std::pow((1.0 - config.lambda) / a, 1.0 / (pp - 2.0));
        js["constant_candidate"] = {{"value", c},
                                    {"level", problem.energy(problem.constant(c))},
                                    {"residual", problem.residual(problem.constant(c))}};
      }
      rep["solution"] = js;
      ok = ok && s.residual <= mopt.tol && s.norm >= mopt.nontrivial_floor && s.level > 0.0;
      if (options.write_files) {
        write_text(path_in(config.output, "solution.csv"), solution_csv(sys.mesh, s.u));
        write_text(path_in(config.output, "trace.csv"), trace_csv(s.trace));
      }
    } else {
      current = "geometry";
      t0 = Clock::now();
      const int i = splitting_index(decomp, config.lambda);
      rep["splitting_index"] = i;
      LinkingGeometryOptions gopt;
      gopt.samples = config.solver.directions;
      gopt.seed = config.seed;
      const LinkingGeometry geo = verify_linking_geometry(problem, decomp, i, gopt);
      timings["geometry"] = seconds_since(t0);
      rep["certificate"] = to_json(geo);
      if (stage == Stage::geometry)
        return;

      current = "solve";
      t0 = Clock::now();
      LinkingOptions lopt;
      lopt.tol = config.solver.tol;
      lopt.perturbations = config.solver.seeds;
      lopt.seed = config.seed;
      lopt.newton.tol = config.solver.tol;
      const LinkingResult res = solve_linking(problem, decomp, i, geo, lopt);
      timings["solve"] = seconds_since(t0);
      const Solution& s = res.solution;
      json js = to_json(s);
      const double dev = constant_deviation(sys.mesh, s.u);
      js["constant_deviation"] = finite_or_null(dev);
      js["nonconstant"] = !(dev <= 1e-6);
      js["nontrivial"] = s.norm >= lopt.nontrivial_floor;
      js["level_at_least_beta"] = s.level >= geo.beta - lopt.tol;
      json seeds = json::array();
      for (const SeedRecord& r : res.seeds)
        seeds.push_back({{"seed", r.seed}, {"status", r.status}, {"residual", r.residual},
                         {"level", r.level}, {"anorm", r.norm}, {"iterations", r.iterations}});
      js["seeds"] = seeds;
      js["roots_found"] = res.roots.size();
      rep["solution"] = js;
      ok = ok && s.residual <= lopt.tol && s.norm >= lopt.nontrivial_floor &&
           s.level >= geo.beta - lopt.tol && s.level > 0.0;
      if (options.write_files) {
        write_text(path_in(config.output, "solution.csv"), solution_csv(sys.mesh, s.u));
        write_text(path_in(config.output, "trace.csv"), trace_csv(s.trace));
      }
    }
  }
}

} // namespace

RunOutcome run(const RunConfig& config, Stage stage, const RunOptions& options)
{
  if (stage == Stage::verify_paper)
    return run_verify_paper(config, options);

  RunOutcome out;
  json& rep = out.report;
  rep["tool"] = {{"name", "mixnl"}, {"version", kToolVersion}};
  rep["stage"] = to_string(stage);
  rep["config"] = to_json(config);
  rep["seed"] = config.seed;
  json timings = json::object();
  bool ok = true;
  std::string current = "validate";
  try {
    execute(config, stage, options, rep, timings, ok, current);
  } catch (const Error& e) {
    ok = false;
    out.error = current + ": " + e.what();
    rep["error"] = {{"stage", current}, {"message", e.what()}};
  }
  rep["timings"] = timings;
  rep["ok"] = ok;
  out.ok = ok;
  if (options.write_files) {
    try {
      ensure_dir(config.output);
      write_text(path_in(config.output, "report.json"), rep.dump(2) + "\n");
    } catch (const Error& e) {
      if (!out.error)
        out.error = std::string("report: ") + e.what();
      out.ok = false;
    }
  }
  return out;
}

RunOutcome run_verify_paper(const RunConfig& config, const RunOptions& options)
{
  RunOutcome out;
  json& rep = out.report;
  rep["tool"] = {{"name", "mixnl"}, {"version", kToolVersion}};
  rep["stage"] = to_string(Stage::verify_paper);
  bool ok = true;
  std::string current = "remark";
  try {
    const auto t0 = Clock::now();
    SpectralMeasure mu = config.measure.build();
    if (mu.empty())
      mu = SpectralMeasure::from_atoms({{0.5, 1.0}});
    const int n_in = config.n_in % 2 == 0 ? config.n_in : config.n_in + 1;
    const Mesh1D mesh = build_mesh({-1.0, 1.0}, std::max(config.collar_R, 2.0), n_in, config.n_ext);
    const std::vector<double> pts = default_remark_points();
    const ExampleReport remark = run_remark_example(mu, mesh, pts);
    rep["measure"] = measure_json(mu, 0.0);
    rep["remark"] = to_json(remark);

    current = "appendix";
    const std::vector<int> ns = {1, 2, 5, 10, 100, 1000};
    const ExampleReport appendix = run_appendix_example(ns);
    rep["appendix"] = to_json(appendix);
    rep["timings"] = {{"total", seconds_since(t0)}};
    ok = remark.passed() && appendix.passed();
  } catch (const Error& e) {
    ok = false;
    out.error = current + ": " + e.what();
    rep["error"] = {{"stage", current}, {"message", e.what()}};
  }
  rep["ok"] = ok;
  out.ok = ok;
  if (options.write_files) {
    ensure_dir(config.output);
    write_text(path_in(config.output, "report.json"), rep.dump(2) + "\n");
  }
  return out;
}

} // namespace mixnl
