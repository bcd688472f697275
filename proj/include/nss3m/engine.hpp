// Slice-by-slice evaluation of the Reshetikhin-Turaev functor and the modified invariant F'.
#pragma once

#include "diagram.hpp"

#include <cstdio>

namespace nss3m {

/// Engine invariant violated (non-scalar T_e, cut-dependence).
class DefectError : public Error {
 public:
  using Error::Error;
};

/// Diagram refused before evaluation (validation, width cap).
class DiagramError : public Error {
 public:
  using Error::Error;
};

struct EvaluationResult {
  DenseMap map;
  std::optional<Scalar> scalar;
};

struct CutTangle {
  Mat te;  // F(T_e) : V -> V
  Scalar lambda;
  double residual = 0;
  StrandLabel label;
};

/// Applies a local operator on strands [pos, pos+k_in) of every column of `state`.
inline Mat apply_local(const Mat& state, const std::vector<std::size_t>& dims, std::size_t pos, std::size_t k_in,
                       const Mat& op) {
  std::size_t left = 1, mid = 1, right = 1;
  for (std::size_t i = 0; i < pos; ++i) left *= dims[i];
  for (std::size_t i = pos; i < pos + k_in; ++i) mid *= dims[i];
  for (std::size_t i = pos + k_in; i < dims.size(); ++i) right *= dims[i];
  if (std::size_t(op.cols()) != mid) throw Error("apply_local: operator does not match its strands");
  const std::size_t mout = std::size_t(op.rows());
  using RowMat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Mat out(Eigen::Index(left * mout * right), state.cols());
  for (Eigen::Index b = 0; b < state.cols(); ++b) {
    const Scalar* src = state.col(b).data();
    Scalar* dst = out.col(b).data();
    for (std::size_t l = 0; l < left; ++l) {
      Eigen::Map<const RowMat> in(src + l * mid * right, Eigen::Index(mid), Eigen::Index(right));
      Eigen::Map<RowMat> o(dst + l * mout * right, Eigen::Index(mout), Eigen::Index(right));
      o.noalias() = op * in;
    }
  }
  return out;
}

inline std::string hex_key(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

inline std::string color_key(const Color& c) {
  if (c.kind == Color::Kind::Periodic) return "e" + std::to_string(c.t);
  return "t" + hex_key(c.alpha.real()) + "," + hex_key(c.alpha.imag());
}

inline std::string label_key(const StrandLabel& l) { return color_key(l.color) + (l.orient > 0 ? "+" : "-"); }

class Engine {
 public:
  explicit Engine(RootData rd, std::size_t width_cap = 8) : rd_(rd), width_cap_(width_cap) {}

  const RootData& root() const { return rd_; }
  std::size_t width_cap() const { return width_cap_; }

  /// Module of a strand label: V for (c,+), V* for (c,-).
  const ModuleRep& module(const StrandLabel& l) const {
    return cached_module(label_key(l), [&] {
      ModuleRep base = module_of(rd_, l.color);
      return l.orient > 0 ? base : dual_module(rd_, base);
    });
  }

  const Mat& pivot_of(const StrandLabel& l) const {
    return cached("piv" + label_key(l), [&] { return pivot(rd_, module(l)); });
  }

  /// Local operator of an event, given the word below it; fills the word above it.
  const Mat& local_op(const SliceEvent& e, const std::vector<StrandLabel>& below, std::vector<StrandLabel>& above,
                      std::size_t& k_in) const {
    above = below;
    const std::size_t p = e.pos;
    switch (e.kind) {
      case EventKind::Identity: {
        k_in = below.empty() ? 0 : 1;
        StrandLabel l = below.empty() ? StrandLabel(Color::periodic(0), 1) : below[p];
        return cached("id" + label_key(l), [&] {
          std::size_t n = below.empty() ? 1 : module(l).dim();
          return Mat(Mat::Identity(Eigen::Index(n), Eigen::Index(n)));
        });
      }
      case EventKind::CrossPos:
      case EventKind::CrossNeg: {
        k_in = 2;
        const StrandLabel a = below[p], b = below[p + 1];
        std::swap(above[p], above[p + 1]);
        if (e.kind == EventKind::CrossPos)
          return cached("X+" + label_key(a) + "|" + label_key(b), [&] { return braiding(rd_, module(a), module(b)); });
        return cached("X-" + label_key(a) + "|" + label_key(b), [&] { return braiding_inv(rd_, module(a), module(b)); });
      }
      case EventKind::Cup: {
        k_in = 0;
        const StrandLabel left = e.label, right = e.label.reversed();
        above.insert(above.begin() + std::ptrdiff_t(p), {left, right});
        const StrandLabel up(e.label.color, +1);
        if (left.orient > 0) return cached("b" + label_key(up), [&] { return dual_data(rd_, module(up)).b; });
        return cached("b'" + label_key(up), [&] { return dual_data(rd_, module(up)).b_prime; });
      }
      case EventKind::Cap: {
        k_in = 2;
        const StrandLabel left = below[p];
        above.erase(above.begin() + std::ptrdiff_t(p), above.begin() + std::ptrdiff_t(p + 2));
        const StrandLabel up(left.color, +1);
        if (left.orient > 0) return cached("d'" + label_key(up), [&] { return dual_data(rd_, module(up)).d_prime; });
        return cached("d" + label_key(up), [&] { return dual_data(rd_, module(up)).d; });
      }
      case EventKind::Twist: {
        k_in = 1;
        const StrandLabel l = below[p];
        if (e.sign > 0) return cached("th+" + label_key(l), [&] { return twist(rd_, module(l)); });
        return cached("th-" + label_key(l), [&] { return Mat(twist(rd_, module(l)).partialPivLu().inverse()); });
      }
      case EventKind::Coupon: {
        const Coupon& c = *e.coupon;
        k_in = c.in.size();
        above.erase(above.begin() + std::ptrdiff_t(p), above.begin() + std::ptrdiff_t(p + k_in));
        above.insert(above.begin() + std::ptrdiff_t(p), c.out.begin(), c.out.end());
        return c.map;
      }
    }
    throw Error("unknown event");
  }

  std::vector<std::size_t> dims_of(const std::vector<StrandLabel>& word) const {
    std::vector<std::size_t> out;
    for (const auto& l : word) out.push_back(module(l).dim());
    return out;
  }

  void check(const SlicedDiagram& d, const Wiring& w) const {
    if (d.root != 0 && d.root != rd_.r)
      throw DiagramError("diagram declares root " + std::to_string(d.root) + " but engine runs at r=" + std::to_string(rd_.r));
    if (!w.ok()) {
      std::string msg = "invalid diagram:";
      for (const auto& s : w.defects) msg += "\n  " + s;
      throw DiagramError(msg);
    }
    if (w.max_width > width_cap_)
      throw DiagramError("width cap exceeded: diagram needs " + std::to_string(w.max_width) + " strands, cap is " +
                         std::to_string(width_cap_));
  }

  /// Forward propagation of `state` (columns) through slices [from, to).
  Mat forward(const std::vector<SliceEvent>& slices, std::size_t from, std::size_t to, std::vector<StrandLabel> word,
              Mat state) const {
    for (std::size_t s = from; s < to; ++s) {
      std::vector<StrandLabel> above;
      std::size_t k = 0;
      const Mat& op = local_op(slices[s], word, above, k);
      if (!(slices[s].kind == EventKind::Identity && word.empty())) state = apply_local(state, dims_of(word), slices[s].pos, k, op);
      word = std::move(above);
    }
    return state;
  }

  /// Covector on the word below slice `from`, obtained by pulling back `covec` from the top of slice to-1.
  Mat backward(const std::vector<SliceEvent>& slices, const std::vector<std::vector<StrandLabel>>& words,
               std::size_t from, std::size_t to, Mat covec) const {
    for (std::size_t s = to; s-- > from;) {
      std::vector<StrandLabel> above;
      std::size_t k = 0;
      const Mat& op = local_op(slices[s], words[s], above, k);
      if (slices[s].kind == EventKind::Identity && words[s].empty()) continue;
      const std::size_t kout = above.size() + k - words[s].size();
      covec = apply_local(covec, dims_of(above), slices[s].pos, kout, op.transpose());
    }
    return covec;
  }

  EvaluationResult evaluate(const SlicedDiagram& d) const {
    Wiring w = analyze(d);
    check(d, w);
    const auto dims = dims_of(d.bottom);
    std::size_t n = 1;
    for (auto x : dims) n *= x;
    Mat state = Mat::Identity(Eigen::Index(n), Eigen::Index(n));
    state = forward(d.slices, 0, d.slices.size(), d.bottom, state);
    EvaluationResult res{DenseMap(state), std::nullopt};
    Scalar lam;
    if (state.rows() == state.cols() && scalar_of(state, rd_.tol, lam)) res.scalar = lam;
    return res;
  }

  Scalar closed_value(const SlicedDiagram& d) const {
    if (!d.closed()) throw DiagramError("closed_value needs a closed diagram");
    EvaluationResult r = evaluate(d);
    return r.map.m(0, 0);
  }

  /// F(T_e) for the (1,1)-tangle obtained by cutting the arc at `arc`.
  CutTangle cut_tangle(const SlicedDiagram& d0, ArcRef arc) const {
    if (!d0.closed()) throw DiagramError("modified_eval needs a closed diagram");
    Wiring w0 = analyze(d0);
    check(d0, w0);
    if (arc.level >= w0.words.size() || arc.pos >= w0.words[arc.level].size())
      throw DiagramError("cut arc (" + std::to_string(arc.level) + "," + std::to_string(arc.pos) + ") does not exist");
    SlicedDiagram d = d0;
    std::size_t level = arc.level;
    if (arc.pos > 0) {
      // isotope the arc to the left boundary: over-crossings in, inverse crossings out
      std::vector<SliceEvent> ins;
      for (std::size_t j = arc.pos; j-- > 0;) ins.push_back(SliceEvent::cross_pos(j));
      for (std::size_t j = 0; j < arc.pos; ++j) ins.push_back(SliceEvent::cross_neg(j));
      d.slices.insert(d.slices.begin() + std::ptrdiff_t(level), ins.begin(), ins.end());
      level += arc.pos;
    }
    Wiring w = arc.pos > 0 ? analyze(d) : std::move(w0);
    if (w.max_width > width_cap_) throw DiagramError("width cap exceeded while rerouting the cut");
    const auto& word = w.words[level];
    const StrandLabel cut = word[0];
    if (!cut.color.is_typical()) throw DiagramError("cut arc is not typical: " + to_string(cut));
    Mat x = forward(d.slices, 0, level, {}, Mat::Ones(1, 1));
    Mat y = backward(d.slices, w.words, level, d.slices.size(), Mat::Ones(1, 1));
    const auto dims = dims_of(word);
    const Eigen::Index dv = Eigen::Index(dims[0]);
    const Eigen::Index rest = x.rows() / dv;
    // row index = a * rest + w; reshape as dv x rest row-major
    using RowMat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMat> xm(x.data(), dv, rest), ym(y.data(), dv, rest);
    Mat m = xm * ym.transpose();
    CutTangle out;
    out.label = cut;
    out.te = pivot_of(cut).partialPivLu().solve(m);
    if (!scalar_of(out.te, std::max(rd_.tol, 1e-12) * 1e3, out.lambda, &out.residual)) {
      throw DefectError("F(T_e) is not scalar (residual " + std::to_string(out.residual) + ")");
    }
    return out;
  }

  /// F'(T) = d(V) <T_e>.
  Scalar modified_eval(const SlicedDiagram& d, ArcRef arc) const {
    CutTangle t = cut_tangle(d, arc);
    return mod_dim(rd_, t.label.color.alpha) * t.lambda;
  }

 private:
  template <class F>
  const Mat& cached(const std::string& key, F&& make) const {
    {
      std::lock_guard<std::mutex> g(mu_);
      auto it = ops_.find(key);
      if (it != ops_.end()) return it->second;
    }
    Mat value = make();
    std::lock_guard<std::mutex> g(mu_);
    return ops_.emplace(key, std::move(value)).first->second;
  }
  template <class F>
  const ModuleRep& cached_module(const std::string& key, F&& make) const {
    {
      std::lock_guard<std::mutex> g(mu_);
      auto it = mods_.find(key);
      if (it != mods_.end()) return it->second;
    }
    ModuleRep value = make();
    std::lock_guard<std::mutex> g(mu_);
    return mods_.emplace(key, std::move(value)).first->second;
  }

  RootData rd_;
  std::size_t width_cap_;
  mutable std::mutex mu_;
  mutable std::map<std::string, Mat> ops_;
  mutable std::map<std::string, ModuleRep> mods_;
};

}  // namespace nss3m
