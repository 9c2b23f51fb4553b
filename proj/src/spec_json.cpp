#include <influence/spec_json.hpp>

#include <memory>
#include <stdexcept>

namespace influence
{

namespace
{

using nlohmann::json;

constexpr char hex_digits[] = "0123456789abcdef";

int hex_value( char c )
{
  if ( c >= '0' && c <= '9' )
    return c - '0';
  if ( c >= 'a' && c <= 'f' )
    return c - 'a' + 10;
  if ( c >= 'A' && c <= 'F' )
    return c - 'A' + 10;
  throw std::invalid_argument( std::string( "invalid hex digit '" ) + c + "'" );
}

json prefix_set_to_json( const PrefixSet& R )
{
  if ( R.is_predicate() )
  {
    return json{ { "predicate_seed", R.predicate_seed() }, { "density", R.density() } };
  }
  auto arr = json::array();
  for ( auto x : R.members() )
  {
    arr.push_back( prefix_to_hex( x, R.k() ) );
  }
  return arr;
}

std::shared_ptr<const PrefixSet> prefix_set_from_json( const json& j, unsigned k, std::optional<unsigned> weight )
{
  if ( j.is_array() )
  {
    std::vector<std::uint64_t> members;
    members.reserve( j.size() );
    for ( auto const& item : j )
    {
      members.push_back( prefix_from_hex( item.get<std::string>(), k ) );
    }
    return std::make_shared<const PrefixSet>( PrefixSet::explicit_set( k, std::move( members ) ) );
  }
  if ( j.is_object() )
  {
    return std::make_shared<const PrefixSet>(
        PrefixSet::predicate( k, j.at( "predicate_seed" ).get<std::uint64_t>(), j.at( "density" ).get<double>(), weight ) );
  }
  throw std::invalid_argument( "R must be an array of hex prefixes or a predicate object" );
}

std::string table_to_hex( const std::vector<std::uint8_t>& values )
{
  auto const digits = std::max<std::size_t>( 1, values.size() / 4 );
  std::string s( digits, '0' );
  for ( std::size_t d = 0; d < digits; ++d )
  {
    unsigned nibble = 0;
    for ( std::size_t b = 0; b < 4 && 4 * d + b < values.size(); ++b )
    {
      nibble |= static_cast<unsigned>( values[4 * d + b] ) << b;
    }
    s[digits - 1 - d] = hex_digits[nibble];
  }
  return s;
}

std::vector<std::uint8_t> table_from_hex( const std::string& hex, std::size_t n )
{
  std::size_t const size = std::size_t{ 1 } << n;
  auto const digits = std::max<std::size_t>( 1, size / 4 );
  if ( hex.size() != digits )
  {
    throw std::invalid_argument( "truth table hex must have max(1, 2^n/4) digits" );
  }
  std::vector<std::uint8_t> values( size, 0 );
  for ( std::size_t d = 0; d < digits; ++d )
  {
    auto const nibble = hex_value( hex[digits - 1 - d] );
    for ( std::size_t b = 0; b < 4; ++b )
    {
      if ( 4 * d + b < size )
      {
        values[4 * d + b] = ( nibble >> b ) & 1;
      }
      else if ( ( nibble >> b ) & 1 )
      {
        throw std::invalid_argument( "truth table hex has bits beyond 2^n" );
      }
    }
  }
  return values;
}

template<class... Ts>
struct overloaded : Ts...
{
  using Ts::operator()...;
};
template<class... Ts>
overloaded( Ts... ) -> overloaded<Ts...>;

} // namespace

std::string prefix_to_hex( std::uint64_t prefix, unsigned k )
{
  auto const digits = std::max( 1u, ( k + 3 ) / 4 );
  std::string s( digits, '0' );
  for ( unsigned d = 0; d < digits; ++d )
  {
    s[digits - 1 - d] = hex_digits[( prefix >> ( 4 * d ) ) & 0xf];
  }
  return s;
}

std::uint64_t prefix_from_hex( const std::string& hex, unsigned k )
{
  if ( hex.empty() || hex.size() > 16 )
  {
    throw std::invalid_argument( "prefix hex must have 1 to 16 digits" );
  }
  std::uint64_t value = 0;
  for ( char c : hex )
  {
    value = ( value << 4 ) | static_cast<std::uint64_t>( hex_value( c ) );
  }
  if ( k < 64 && ( value >> k ) != 0 )
  {
    throw std::invalid_argument( "prefix " + hex + " does not fit in k bits" );
  }
  return value;
}

json spec_to_json( const FunctionSpec& spec )
{
  json j;
  j["kind"] = spec.kind();
  auto& params = j["params"];
  params["n"] = spec.dimension();
  std::visit( overloaded{
                  [&]( const spec::Constant& s ) { params["value"] = s.value ? 1 : 0; },
                  [&]( const spec::Dictator& s ) { params["i"] = s.index; },
                  [&]( const spec::Threshold& s ) {
                    params["k"] = s.k;
                    params["t"] = s.t;
                  },
                  [&]( const spec::Parity& s ) {
                    params["first"] = s.first;
                    params["last"] = s.last;
                  },
                  [&]( const spec::MonotoneLowerbound& s ) {
                    params["k"] = s.k;
                    params["t"] = s.t;
                    params["i_star"] = s.i_star;
                    j["R"] = prefix_set_to_json( *s.R );
                  },
                  [&]( const spec::GeneralLowerbound& s ) {
                    params["k"] = s.k;
                    j["R"] = prefix_set_to_json( *s.R );
                  },
                  [&]( const spec::TruthTable& s ) { params["table"] = table_to_hex( s.values ); },
              },
              spec.body() );
  return j;
}

FunctionSpec spec_from_json( const json& j )
{
  auto const kind = j.at( "kind" ).get<std::string>();
  auto const& params = j.at( "params" );
  auto const n = params.at( "n" ).get<std::size_t>();

  if ( kind == "constant" )
  {
    auto const& v = params.at( "value" );
    return FunctionSpec::constant( n, v.is_boolean() ? v.get<bool>() : v.get<int>() != 0 );
  }
  if ( kind == "dictator" )
  {
    return FunctionSpec::dictator( n, params.value( "i", std::size_t{ 1 } ) );
  }
  if ( kind == "threshold" )
  {
    return FunctionSpec::threshold( n, params.value( "k", n ), params.at( "t" ).get<std::size_t>() );
  }
  if ( kind == "majority" )
  {
    return FunctionSpec::majority( n );
  }
  if ( kind == "parity" )
  {
    return FunctionSpec::parity( n, params.value( "first", std::size_t{ 1 } ), params.value( "last", n ) );
  }
  if ( kind == "monotone_lowerbound" )
  {
    auto const k = params.at( "k" ).get<unsigned>();
    auto const t = params.at( "t" ).get<unsigned>();
    auto R = prefix_set_from_json( j.at( "R" ), k, t );
    return FunctionSpec::monotone_lowerbound( n, k, t, params.value( "i_star", 0.0 ), std::move( R ) );
  }
  if ( kind == "general_lowerbound" )
  {
    auto const k = params.at( "k" ).get<unsigned>();
    auto R = prefix_set_from_json( j.at( "R" ), k, std::nullopt );
    return FunctionSpec::general_lowerbound( n, k, std::move( R ) );
  }
  if ( kind == "truth_table" )
  {
    if ( n == 0 || n > FunctionSpec::max_truth_table_dimension )
    {
      throw std::invalid_argument( "truth table dimension must lie in [1, 24]" );
    }
    return FunctionSpec::truth_table( n, table_from_hex( params.at( "table" ).get<std::string>(), n ) );
  }
  throw std::invalid_argument( "unknown function kind: " + kind );
}

} // namespace influence
