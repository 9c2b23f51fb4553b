/*!
  \file spec_json.hpp
  \brief JSON form of FunctionSpec

  Schema: {"kind": "...", "params": {...}, "R": ["<hex>", ...] | {"predicate_seed": u64, "density": real}}

  kinds and params:
    constant            {n, value}
    dictator            {n, i}
    threshold           {n, k, t}
    majority            {n}              (input only; written back as threshold)
    parity              {n, first, last} (first/last default to 1..n)
    monotone_lowerbound {n, k, t, i_star} + R
    general_lowerbound  {n, k} + R
    truth_table         {n, table}

  A prefix x_1..x_k is written as the lowercase hex value of the integer
  whose bit j is x_{j+1}, zero-padded to ceil(k/4) digits.  A truth table is
  the hex value of the 2^n-bit integer whose bit j is f at index j, most
  significant digit first.  The predicate density is |R| / 2^k.
*/

#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include <influence/function_spec.hpp>

namespace influence
{

nlohmann::json spec_to_json( const FunctionSpec& spec );
FunctionSpec spec_from_json( const nlohmann::json& j );

std::string prefix_to_hex( std::uint64_t prefix, unsigned k );
std::uint64_t prefix_from_hex( const std::string& hex, unsigned k );

} // namespace influence
