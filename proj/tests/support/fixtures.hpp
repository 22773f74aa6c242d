#ifndef CHAINGLUE_TEST_FIXTURES_HPP
#define CHAINGLUE_TEST_FIXTURES_HPP

#include <random>
#include <string>
#include <vector>

#include "chainglue/compose.hpp"
#include "chainglue/core.hpp"

namespace chainglue::test {

ChainModel example1_a();
ChainModel example1_b();
ChainModel example2_a();
ChainModel example2_b();

/// Example 1 glued at A {1,2} to B {1,2}.
GlueSpec example1_spec();
/// Example 2 glued at A {1,2} to B {1,2}.
GlueSpec example2_spec();

/// Irreducible generator with n states. A random Hamiltonian cycle makes it
/// strongly connected; every other edge is present with probability
/// `density`. Rates are log-uniform on [0.1, 10].
ChainModel random_chain(std::mt19937_64& gen, Index n, double density = 0.5);

/// Uniform integer in [lo, hi].
Index uniform_index(std::mt19937_64& gen, Index lo, Index hi);

/// Two distinct indices below n.
std::pair<Index, Index> distinct_pair(std::mt19937_64& gen, Index n);

/// Gaussian elimination with partial pivoting written out by hand, as an
/// oracle independent of the library's factorization.
Vector gauss_solve(Matrix a, Vector b);

/// Stationary vector by solving Q^T pi = 0 with the first equation replaced
/// by normalization.
Vector oracle_stationary(const Matrix& q);

/// Reachability by Floyd-Warshall transitive closure.
bool oracle_irreducible(const Matrix& q);

double max_abs_diff(const Vector& a, const Vector& b);

/// Directory holding the example chain files.
std::string data_dir();

}  // namespace chainglue::test

#endif  // CHAINGLUE_TEST_FIXTURES_HPP
