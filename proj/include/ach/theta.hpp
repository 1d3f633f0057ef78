#pragma once

#include "ach/jet.hpp"

#include <array>
#include <cstdint>
#include <functional>

namespace ach {

// Frame index set {infinity, 0, 1, 1bar} of the rescaled frame
// {rho d_rho, rho^2 T, rho Z_1, rho Z_1bar}.
enum : int { IDX_INF = 0, IDX_ZERO = 1, IDX_ONE = 2, IDX_BAR = 3 };

inline int conj_idx(int a) { return a < 2 ? a : 5 - a; }

struct Word {
  int rank = 0;
  std::array<int, 4> a{0, 0, 0, 0};

  Word() = default;
  Word(std::initializer_list<int> list) {
    rank = int(list.size());
    int i = 0;
    for (int x : list) a[i++] = x;
  }
  int flat() const {
    int f = 0;
    for (int i = 0; i < rank; ++i) f = f * 4 + a[i];
    return f;
  }
  static Word from_flat(int flat, int rank) {
    Word w;
    w.rank = rank;
    for (int i = rank - 1; i >= 0; --i) {
      w.a[i] = flat & 3;
      flat >>= 2;
    }
    return w;
  }
  Word conjugated() const {
    Word w = *this;
    for (int i = 0; i < rank; ++i) w.a[i] = conj_idx(w.a[i]);
    return w;
  }
  Word with(int slot, int letter) const {
    Word w = *this;
    w.a[slot] = letter;
    return w;
  }
  Word prepend(int letter) const {
    Word w;
    w.rank = rank + 1;
    w.a[0] = letter;
    for (int i = 0; i < rank; ++i) w.a[i + 1] = a[i];
    return w;
  }
};

/// Sign of the permutation taking (0, 1, 1bar, infinity) to w; 0 when a
/// letter repeats. Used for the totally antisymmetric volume tensor.
int eps_sign(const Word& w);

/// Multi-indexed array over the frame index set with JetSeries entries,
/// storing one representative per conjugation orbit (swap 1 <-> 1bar). The
/// stored tensors are real in the sense conj(T_w) = T_{conj w}.
class ThetaTensor {
 public:
  ThetaTensor() = default;
  /// upmask bit j set means slot j is contravariant.
  ThetaTensor(int rank, unsigned upmask, int order)
      : rank_(rank), upmask_(upmask), order_(order), comp_(std::size_t(1) << (2 * rank)),
        has_(std::size_t(1) << (2 * rank), 0) {}

  int rank() const { return rank_; }
  int order() const { return order_; }
  unsigned upmask() const { return upmask_; }
  bool upper(int slot) const { return (upmask_ >> slot) & 1u; }

  bool is_canonical(const Word& w) const { return w.flat() <= w.conjugated().flat(); }

  /// Component at any word; conjugation orbits expand on the fly.
  JetSeries component(const Word& w) const {
    int f = w.flat();
    int fc = w.conjugated().flat();
    if (f <= fc) return has_[f] ? comp_[f] : JetSeries(order_);
    return has_[fc] ? comp_[fc].conj() : JetSeries(order_);
  }
  /// True if the component is structurally zero (unset or all-zero).
  bool known_zero(const Word& w) const {
    int f = std::min(w.flat(), w.conjugated().flat());
    return !has_[f] || comp_[f].is_zero();
  }

  void set(const Word& w, JetSeries s) {
    int f = w.flat();
    int fc = w.conjugated().flat();
    if (f <= fc) {
      comp_[f] = std::move(s);
      has_[f] = 1;
    } else {
      comp_[fc] = s.conj();
      has_[fc] = 1;
    }
  }

  void for_each_canonical(const std::function<void(const Word&)>& f) const {
    int total = 1 << (2 * rank_);
    for (int flat = 0; flat < total; ++flat) {
      Word w = Word::from_flat(flat, rank_);
      if (is_canonical(w)) f(w);
    }
  }
  std::vector<Word> canonical_words() const {
    std::vector<Word> ws;
    int total = 1 << (2 * rank_);
    for (int flat = 0; flat < total; ++flat) {
      Word w = Word::from_flat(flat, rank_);
      if (is_canonical(w)) ws.push_back(w);
    }
    return ws;
  }

  /// U(1) charge of the component: +1 per upper 1 / lower 1bar, -1 per
  /// lower 1 / upper 1bar. Drives the connection correction of the
  /// Tanaka-Webster derivative in a unitary frame.
  int charge(const Word& w) const {
    int q = 0;
    for (int i = 0; i < rank_; ++i) {
      if (w.a[i] == IDX_ONE) q += upper(i) ? 1 : -1;
      if (w.a[i] == IDX_BAR) q += upper(i) ? -1 : 1;
    }
    return q;
  }

  /// Slot count entering the radial covariant derivative: each lower slot
  /// adds 1 (2 if it carries a 0 index), upper slots subtract.
  int inf_weight(const Word& w) const {
    int h = 0;
    for (int i = 0; i < rank_; ++i) {
      int c = 1 + (w.a[i] == IDX_ZERO ? 1 : 0);
      h += upper(i) ? -c : c;
    }
    return h;
  }

  friend ThetaTensor operator+(const ThetaTensor& A, const ThetaTensor& B);
  friend ThetaTensor operator-(const ThetaTensor& A, const ThetaTensor& B);

  double max_abs() const {
    double m = 0.0;
    for (std::size_t i = 0; i < comp_.size(); ++i)
      if (has_[i]) m = std::max(m, comp_[i].max_abs());
    return m;
  }

 private:
  int rank_ = 0;
  unsigned upmask_ = 0;
  int order_ = -1;
  std::vector<JetSeries> comp_;
  std::vector<char> has_;
};

}  // namespace ach
