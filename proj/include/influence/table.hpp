/*!
  \file table.hpp
  \brief Row-oriented result tables and their CSV / JSON writers
*/

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace influence
{

/*! \brief One table cell; monostate is an absent value (empty in CSV, null in JSON) */
using Cell = std::variant<std::monostate, bool, std::int64_t, std::uint64_t, double, std::string>;

struct Table
{
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /*! \brief Appends a row; throws std::invalid_argument on a width mismatch */
  void add_row( std::vector<Cell> row );
};

/*! \brief %.17g; "nan", "inf", "-inf" for non-finite values */
std::string format_real( double value );

std::string format_cell( const Cell& cell );

/*! \brief Header line then one line per row; fields containing , " or newlines are quoted */
void write_csv( const Table& table, std::ostream& os );

/*! \brief Array of objects keyed by column name, in column order */
void write_json( const Table& table, std::ostream& os );

} // namespace influence
