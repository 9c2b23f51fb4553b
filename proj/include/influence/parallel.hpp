#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace influence
{

/*! \brief Calls fn(i) for i in [0, count) on up to `workers` threads

  Indices are handed out in contiguous blocks; callers store results by
  index so aggregation order never depends on scheduling.  The first
  exception thrown by any worker is rethrown on the calling thread.
*/
template<class Fn>
void parallel_for( std::size_t count, std::size_t workers, Fn&& fn )
{
  workers = std::max<std::size_t>( 1, std::min( workers, count ) );
  if ( workers == 1 )
  {
    for ( std::size_t i = 0; i < count; ++i )
    {
      fn( i );
    }
    return;
  }

  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> threads;
  threads.reserve( workers );
  for ( std::size_t w = 0; w < workers; ++w )
  {
    auto const begin = count * w / workers;
    auto const end = count * ( w + 1 ) / workers;
    threads.emplace_back( [&, begin, end] {
      try
      {
        for ( auto i = begin; i < end; ++i )
        {
          fn( i );
        }
      }
      catch ( ... )
      {
        std::lock_guard lock( failure_mutex );
        if ( !failure )
        {
          failure = std::current_exception();
        }
      }
    } );
  }
  for ( auto& t : threads )
  {
    t.join();
  }
  if ( failure )
  {
    std::rethrow_exception( failure );
  }
}

} // namespace influence
