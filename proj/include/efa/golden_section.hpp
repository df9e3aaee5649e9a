#pragma once

#include <cmath>
#include <utility>

namespace efa {

/// Maximizes a unimodal function on [lo, hi]. Stops once the bracket is no
/// wider than xtol; returns the best probed (x, f(x)).
template <typename Scalar, typename Fn>
std::pair<Scalar, Scalar> golden_section_maximize(Fn&& fn, Scalar lo, Scalar hi, Scalar xtol) {
  const Scalar inv_phi = (std::sqrt(Scalar(5)) - Scalar(1)) / Scalar(2);
  Scalar a = lo, b = hi;
  Scalar c = b - inv_phi * (b - a);
  Scalar d = a + inv_phi * (b - a);
  Scalar fc = fn(c), fd = fn(d);
  while (b - a > xtol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fn(d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace efa
