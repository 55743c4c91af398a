#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <vector>

namespace chole {

using Rational = boost::multiprecision::cpp_rational;

struct SeriesValue {
  double value;
  int terms_used;
  double tail_bound;
};

// T_{v,alpha} summed directly; v must be an even integer for a real value.
SeriesValue T_direct(double v, double alpha);

// Complex value of the defining series for arbitrary v >= 0.
std::complex<double> T_direct_complex(double v, double alpha);

// T_{v,alpha} from the recursion seeded at pi^3/32; v even.
double T_recursive(int v, double alpha);

// All T_{2q,alpha}, q = 0..n, from the recursion.
std::vector<double> T_recursive_table(int n, double alpha);

// T_v = sum tanh((1+2m)pi/2)/(1+2m)^(3+v).
SeriesValue T_plain(double v);

// d_k^(k) .. d_b^(k), exact.
std::vector<Rational> d_coeffs_exact(int b, int k);
std::vector<double> d_coeffs(int b, int k);

// Lower-triangular binomial matrix A and its explicit inverse B.
std::vector<std::vector<Rational>> d_matrix_A(int b, int k);
std::vector<std::vector<Rational>> d_matrix_B(int b, int k);

Rational binomial_exact(int n, int m);
double binomial(int n, int m);

}  // namespace chole
