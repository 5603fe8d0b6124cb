#pragma once

#include "mixnl/assembly.hpp"
#include "mixnl/config.hpp"
#include "mixnl/counterexamples.hpp"
#include "mixnl/linking.hpp"
#include "mixnl/mesh.hpp"
#include "mixnl/mountain_pass.hpp"
#include "mixnl/nonlinearity.hpp"
#include "mixnl/spectra.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace mixnl {

inline constexpr const char* kToolVersion = "0.1.0";

struct AssembledSystem {
  Mesh1D mesh;
  SpectralMeasure measure;
  OperatorMatrices mats;
  double seconds = 0.0;
};

AssembledSystem assemble_system(const RunConfig& config);

/// Mountain pass strictly below lambda_1 = 1, linking at and above.
enum class Branch { mountain_pass, linking };
Branch select_branch(double lambda);
const char* to_string(Branch branch);

enum class Stage { assemble, eigs, geometry, solve_mp, solve_link, verify_paper, full };
const char* to_string(Stage stage);

struct RunOptions {
  /// Write matrices/*.coo into this directory.
  std::optional<std::string> dump_matrices;
  /// Add per-node eigenvector columns to eigs.csv.
  bool eigenvectors = false;
  /// Write report.json and the CSV files into config.output.
  bool write_files = true;
};

struct RunOutcome {
  nlohmann::json report;
  /// All certificates and residual checks passed.
  bool ok = false;
  /// Set when a stage raised an error ("stage: message").
  std::optional<std::string> error;
};

/// Runs the stages up to `stage` (`full` = assemble, eigs, geometry and the
/// branch solver). Module errors are caught and reported with their stage.
RunOutcome run(const RunConfig& config, Stage stage, const RunOptions& options = {});

/// Remark example for the config's measure (default: a single atom at 0.5)
/// and the appendix example for n in {1, 2, 5, 10, 100, 1000}.
RunOutcome run_verify_paper(const RunConfig& config, const RunOptions& options = {});

// Serialization helpers (exposed for tests).
nlohmann::json to_json(const RunConfig& config);
nlohmann::json to_json(const ARReport& report);
nlohmann::json to_json(const SV12Result& result);
nlohmann::json to_json(const MPGeometry& geometry);
nlohmann::json to_json(const LinkingGeometry& geometry);
nlohmann::json to_json(const Solution& solution);
nlohmann::json to_json(const ExampleReport& report);

std::string eigs_csv(const EigenDecomposition& decomp, int count, const Mesh1D* mesh = nullptr);
std::string solution_csv(const Mesh1D& mesh, const Eigen::VectorXd& u);
std::string trace_csv(const std::vector<SaddleTraceRecord>& trace);
void write_coo(const std::string& path, const Eigen::MatrixXd& matrix);
void write_text(const std::string& path, const std::string& body);

} // namespace mixnl
