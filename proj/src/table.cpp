#include <influence/table.hpp>

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace influence
{

namespace
{

std::string csv_field( const std::string& s )
{
  if ( s.find_first_of( ",\"\n\r" ) == std::string::npos )
  {
    return s;
  }
  std::string out = "\"";
  for ( auto ch : s )
  {
    if ( ch == '"' )
    {
      out += '"';
    }
    out += ch;
  }
  out += '"';
  return out;
}

nlohmann::ordered_json to_json( const Cell& cell )
{
  return std::visit(
      []( const auto& v ) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype( v )>;
        if constexpr ( std::is_same_v<T, std::monostate> )
        {
          return nullptr;
        }
        else if constexpr ( std::is_same_v<T, double> )
        {
          if ( !std::isfinite( v ) )
          {
            return nullptr;
          }
          // round-trip through the 17-digit text so both formats carry the same value
          return nlohmann::ordered_json::parse( format_real( v ) );
        }
        else
        {
          return v;
        }
      },
      cell );
}

} // namespace

void Table::add_row( std::vector<Cell> row )
{
  if ( row.size() != columns.size() )
  {
    throw std::invalid_argument( "row has " + std::to_string( row.size() ) + " cells, table has " +
                                 std::to_string( columns.size() ) + " columns" );
  }
  rows.push_back( std::move( row ) );
}

std::string format_real( double value )
{
  if ( std::isnan( value ) )
  {
    return "nan";
  }
  if ( std::isinf( value ) )
  {
    return value > 0 ? "inf" : "-inf";
  }
  char buf[40];
  std::snprintf( buf, sizeof buf, "%.17g", value );
  return buf;
}

std::string format_cell( const Cell& cell )
{
  return std::visit(
      []( const auto& v ) -> std::string {
        using T = std::decay_t<decltype( v )>;
        if constexpr ( std::is_same_v<T, std::monostate> )
        {
          return {};
        }
        else if constexpr ( std::is_same_v<T, bool> )
        {
          return v ? "true" : "false";
        }
        else if constexpr ( std::is_same_v<T, double> )
        {
          return format_real( v );
        }
        else if constexpr ( std::is_same_v<T, std::string> )
        {
          return v;
        }
        else
        {
          return std::to_string( v );
        }
      },
      cell );
}

void write_csv( const Table& table, std::ostream& os )
{
  for ( std::size_t i = 0; i < table.columns.size(); ++i )
  {
    os << ( i ? "," : "" ) << csv_field( table.columns[i] );
  }
  os << '\n';
  for ( auto const& row : table.rows )
  {
    for ( std::size_t i = 0; i < row.size(); ++i )
    {
      os << ( i ? "," : "" ) << csv_field( format_cell( row[i] ) );
    }
    os << '\n';
  }
}

void write_json( const Table& table, std::ostream& os )
{
  auto doc = nlohmann::ordered_json::array();
  for ( auto const& row : table.rows )
  {
    nlohmann::ordered_json record = nlohmann::ordered_json::object();
    for ( std::size_t i = 0; i < row.size(); ++i )
    {
      record[table.columns[i]] = to_json( row[i] );
    }
    doc.push_back( std::move( record ) );
  }
  os << doc.dump( 2 ) << '\n';
}

} // namespace influence
