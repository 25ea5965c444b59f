#pragma once

#include <vector>

#include "sfs/exec.hpp"

namespace sfs {

/// Symmetric tridiagonal matrix: diag[0..n), off[i] couples i and i+1.
struct SymTridiagonal {
    std::vector<double> diag;
    std::vector<double> off;

    int size() const { return static_cast<int>(diag.size()); }
};

/// Number of eigenvalues strictly below x (Sturm sequence via LDL^T pivots).
int sturm_count(const SymTridiagonal& t, double x);

/// Gershgorin enclosure of the spectrum.
struct Interval {
    double lo;
    double hi;
};
Interval gershgorin(const SymTridiagonal& t);

/// Eigenvalues with 0-based indices first .. first+count-1, ascending, by
/// bisection.  Stops when the bracket is narrower than tol * max(1, |mid|).
/// Each index is bisected independently, so the parallel kernel is
/// bit-identical to the serial reference.
std::vector<double> bisect_eigenvalues(const SymTridiagonal& t, int first, int count,
                                       double tol, Exec exec = Exec::Parallel);

/// Inverse iteration for the eigenvector of a (simple) eigenvalue; the
/// result has unit Euclidean norm.
std::vector<double> inverse_iteration(const SymTridiagonal& t, double eigenvalue,
                                      int iterations = 3);

/// y = T x
std::vector<double> multiply(const SymTridiagonal& t, const std::vector<double>& x);

}  // namespace sfs
