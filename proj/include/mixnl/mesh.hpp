#pragma once

#include <Eigen/Dense>

#include <vector>

namespace mixnl {

struct Interval {
  double left;
  double right;

  double length() const { return right - left; }
  /// Strict interior test.
  bool contains(double x) const { return x > left && x < right; }
};

/// Piecewise-linear mesh of [-R, R]: uniform cells on the domain Omega and
/// geometrically graded collar cells on [-R, x_l] and [x_r, R].
class Mesh1D {
public:
  Interval omega() const { return omega_; }
  double collar_radius() const { return collar_radius_; }
  int n_in() const { return n_in_; }
  int n_ext() const { return n_ext_; }

  const std::vector<double>& nodes() const { return nodes_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_cells() const { return num_nodes() - 1; }

  double node(int i) const { return nodes_[i]; }
  double cell_length(int c) const { return nodes_[c + 1] - nodes_[c]; }

  /// Index of the node at x_l; interior nodes are [first_interior, last_interior].
  int first_interior() const { return n_ext_; }
  int last_interior() const { return n_ext_ + n_in_; }
  int num_interior() const { return n_in_ + 1; }

  bool is_interior_node(int i) const { return i >= first_interior() && i <= last_interior(); }
  bool is_interior_cell(int c) const { return c >= first_interior() && c < last_interior(); }

  /// Geometric growth factors of the left and right collar cells
  /// (1 for uniform collars).
  double left_grading() const { return left_grading_; }
  double right_grading() const { return right_grading_; }

  /// P1 interpolant of nodal values at x in [-R, R].
  double interpolate(const Eigen::VectorXd& u, double x) const;

  /// Interior slice of a full DOF vector.
  Eigen::VectorXd interior_values(const Eigen::VectorXd& u) const
  {
    return u.segment(first_interior(), num_interior());
  }

  friend Mesh1D build_mesh(Interval omega, double collar_radius, int n_in, int n_ext);

private:
  Interval omega_{0.0, 0.0};
  double collar_radius_ = 0.0;
  int n_in_ = 0;
  int n_ext_ = 0;
  double left_grading_ = 1.0;
  double right_grading_ = 1.0;
  std::vector<double> nodes_;
};

/// Cells in the collar start at the interior spacing next to the boundary and
/// grow geometrically toward +-R; if n_ext interior-sized cells already cover
/// the collar the spacing is uniform instead.
Mesh1D build_mesh(Interval omega, double collar_radius, int n_in, int n_ext);

} // namespace mixnl
