#include "ach/theta.hpp"

namespace ach {

int eps_sign(const Word& w) {
  if (w.rank != 4) throw PreconditionError("eps_sign needs rank 4");
  // Base ordering (0, 1, 1bar, infinity).
  auto pos = [](int letter) {
    switch (letter) {
      case IDX_ZERO: return 0;
      case IDX_ONE: return 1;
      case IDX_BAR: return 2;
      default: return 3;
    }
  };
  std::array<int, 4> p;
  unsigned seen = 0;
  for (int i = 0; i < 4; ++i) {
    p[i] = pos(w.a[i]);
    if (seen & (1u << p[i])) return 0;
    seen |= 1u << p[i];
  }
  int inv = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (p[i] > p[j]) ++inv;
  return inv % 2 == 0 ? 1 : -1;
}

ThetaTensor operator+(const ThetaTensor& A, const ThetaTensor& B) {
  if (A.rank_ != B.rank_ || A.upmask_ != B.upmask_) throw ShapeMismatch("tensor shape mismatch");
  ThetaTensor C(A.rank_, A.upmask_, std::min(A.order_, B.order_));
  C.for_each_canonical([&](const Word& w) {
    if (A.known_zero(w) && B.known_zero(w)) return;
    C.set(w, A.component(w).truncated(C.order_) + B.component(w).truncated(C.order_));
  });
  return C;
}

ThetaTensor operator-(const ThetaTensor& A, const ThetaTensor& B) {
  if (A.rank_ != B.rank_ || A.upmask_ != B.upmask_) throw ShapeMismatch("tensor shape mismatch");
  ThetaTensor C(A.rank_, A.upmask_, std::min(A.order_, B.order_));
  C.for_each_canonical([&](const Word& w) {
    if (A.known_zero(w) && B.known_zero(w)) return;
    C.set(w, A.component(w).truncated(C.order_) - B.component(w).truncated(C.order_));
  });
  return C;
}

}  // namespace ach
