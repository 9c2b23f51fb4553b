/*!
  \file binomial.hpp
  \brief Binomial coefficients in log space, accurate for n up to ~1e15

  The half-binomial mass C(n,k)/2^n is evaluated with Loader's saddle-point
  expansion (Stirling error terms plus a stable deviance), which keeps the
  relative error near machine precision where plain log-gamma differences
  lose about log10(n) digits.
*/

#pragma once

#include <cstdint>
#include <optional>

namespace influence
{

/*! \brief ln(n!) - ln(sqrt(2 pi n) (n/e)^n) */
double stirling_error( double n );

/*! \brief x ln(x/np) + np - x, without cancellation when x is close to np */
double binomial_deviance( double x, double np );

/*! \brief ln( C(n,k) / 2^n ); -inf when k > n */
double log_half_binomial_pmf( std::uint64_t n, std::uint64_t k );

/*! \brief C(n,k) / 2^n */
double half_binomial_pmf( std::uint64_t n, std::uint64_t k );

/*! \brief ln C(n,k); -inf when k > n */
double log_choose( std::uint64_t n, std::uint64_t k );

/*! \brief C(n,k) as an integer, or nullopt if it does not fit in 64 bits */
std::optional<std::uint64_t> choose_exact( std::uint64_t n, std::uint64_t k );

/*! \brief I[tau^t_k] = k * 2^-(k-1) * C(k-1, t-1); zero when the threshold is constant */
double threshold_influence( std::uint64_t k, std::uint64_t t );

} // namespace influence
