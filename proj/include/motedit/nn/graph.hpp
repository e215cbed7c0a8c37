#pragma once

#include <cmath>
#include <deque>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "motedit/common.hpp"

namespace motedit::nn {

// Reverse-mode autodiff over dense matrices. Nodes live on a Tape (one per
// forward pass, one per thread); parameters live outside the tape in a
// ParamSet so several tapes can read them concurrently. Parameter gradients
// accumulate into Tape::param_grads, keyed by parameter index, which keeps
// backward passes race-free across threads.

template <typename S>
using MatT = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

template <typename S>
struct Param {
  MatT<S> w;
  MatT<S> adam_m;
  MatT<S> adam_v;
  std::string name;
  int index = -1;

  Eigen::Index size() const { return w.size(); }
};

template <typename S>
class ParamSet {
 public:
  Param<S>& add(const std::string& name, int rows, int cols) {
    auto p = std::make_unique<Param<S>>();
    p->name = name;
    p->index = static_cast<int>(params_.size());
    p->w.setZero(rows, cols);
    p->adam_m.setZero(rows, cols);
    p->adam_v.setZero(rows, cols);
    params_.push_back(std::move(p));
    return *params_.back();
  }

  std::size_t size() const { return params_.size(); }
  Param<S>& operator[](std::size_t i) { return *params_[i]; }
  const Param<S>& operator[](std::size_t i) const { return *params_[i]; }

  std::int64_t total_values() const {
    std::int64_t n = 0;
    for (const auto& p : params_) n += p->w.size();
    return n;
  }

 private:
  std::vector<std::unique_ptr<Param<S>>> params_;
};

template <typename S>
struct Node {
  MatT<S> val;
  MatT<S> grad;
  bool needs_grad = false;
  std::function<void()> bw;  // captures parent/param pointers

  Eigen::Index rows() const { return val.rows(); }
  Eigen::Index cols() const { return val.cols(); }
};

template <typename S>
class Tape {
 public:
  using Mt = MatT<S>;
  using N = Node<S>;

  explicit Tape(std::size_t param_count = 0) { param_grads.resize(param_count); }

  void reset(std::size_t param_count) {
    nodes_.clear();
    param_grads.assign(param_count, Mt());
  }

  // --- leaves ---

  N* input(Mt v) {
    N* n = fresh();
    n->val = std::move(v);
    n->needs_grad = false;
    return n;
  }

  N* leaf(const Param<S>& p) {
    N* n = fresh();
    n->val = p.w;
    n->needs_grad = true;
    const int idx = p.index;
    const Param<S>* pp = &p;
    n->bw = [this, n, idx, pp]() {
      accum_param(idx, pp->w.rows(), pp->w.cols(), n->grad);
    };
    return n;
  }

  // Row-gather from an embedding table parameter.
  N* gather_rows(const Param<S>& table, const std::vector<int>& ids) {
    N* n = fresh();
    n->val.resize(static_cast<Eigen::Index>(ids.size()), table.w.cols());
    for (std::size_t i = 0; i < ids.size(); ++i) n->val.row(i) = table.w.row(ids[i]);
    n->needs_grad = true;
    const int idx = table.index;
    const Eigen::Index rows = table.w.rows(), cols = table.w.cols();
    std::vector<int> ids_copy = ids;
    n->bw = [this, n, idx, rows, cols, ids_copy]() {
      Mt& g = param_grad_slot(idx, rows, cols);
      for (std::size_t i = 0; i < ids_copy.size(); ++i) {
        g.row(ids_copy[i]) += n->grad.row(i);
      }
    };
    return n;
  }

  // --- elementwise / linear algebra ---

  N* matmul(N* a, N* b) {
    N* n = binary(a, b);
    n->val.noalias() = a->val * b->val;
    n->bw = [n, a, b]() {
      if (a->needs_grad) accum(a, n->grad * b->val.transpose());
      if (b->needs_grad) accum(b, a->val.transpose() * n->grad);
    };
    return n;
  }

  // a * b^T
  N* matmul_nt(N* a, N* b) {
    N* n = binary(a, b);
    n->val.noalias() = a->val * b->val.transpose();
    n->bw = [n, a, b]() {
      if (a->needs_grad) accum(a, n->grad * b->val);
      if (b->needs_grad) accum(b, n->grad.transpose() * a->val);
    };
    return n;
  }

  N* add(N* a, N* b) {
    N* n = binary(a, b);
    n->val = a->val + b->val;
    n->bw = [n, a, b]() {
      if (a->needs_grad) accum(a, n->grad);
      if (b->needs_grad) accum(b, n->grad);
    };
    return n;
  }

  // Broadcast a 1 x C row over all rows of a.
  N* add_rowvec(N* a, N* row) {
    N* n = binary(a, row);
    n->val = a->val.rowwise() + row->val.row(0);
    n->bw = [n, a, row]() {
      if (a->needs_grad) accum(a, n->grad);
      if (row->needs_grad) accum(row, n->grad.colwise().sum());
    };
    return n;
  }

  N* scale(N* a, S k) {
    N* n = unary(a);
    n->val = a->val * k;
    n->bw = [n, a, k]() {
      if (a->needs_grad) accum(a, n->grad * k);
    };
    return n;
  }

  N* mul_elem(N* a, N* b) {
    N* n = binary(a, b);
    n->val = a->val.cwiseProduct(b->val);
    n->bw = [n, a, b]() {
      if (a->needs_grad) accum(a, n->grad.cwiseProduct(b->val));
      if (b->needs_grad) accum(b, n->grad.cwiseProduct(a->val));
    };
    return n;
  }

  N* slice_rows(N* a, Eigen::Index start, Eigen::Index count) {
    N* n = unary(a);
    n->val = a->val.middleRows(start, count);
    n->bw = [n, a, start, count]() {
      if (!a->needs_grad) return;
      ensure_zero(a);
      a->grad.middleRows(start, count) += n->grad;
    };
    return n;
  }

  N* slice_cols(N* a, Eigen::Index start, Eigen::Index count) {
    N* n = unary(a);
    n->val = a->val.middleCols(start, count);
    n->bw = [n, a, start, count]() {
      if (!a->needs_grad) return;
      ensure_zero(a);
      a->grad.middleCols(start, count) += n->grad;
    };
    return n;
  }

  N* concat_rows(const std::vector<N*>& parts) {
    N* n = fresh();
    Eigen::Index rows = 0;
    const Eigen::Index cols = parts.front()->cols();
    for (N* p : parts) {
      rows += p->rows();
      n->needs_grad = n->needs_grad || p->needs_grad;
    }
    n->val.resize(rows, cols);
    Eigen::Index at = 0;
    for (N* p : parts) {
      n->val.middleRows(at, p->rows()) = p->val;
      at += p->rows();
    }
    std::vector<N*> ps = parts;
    n->bw = [n, ps]() {
      Eigen::Index at = 0;
      for (N* p : ps) {
        if (p->needs_grad) accum(p, n->grad.middleRows(at, p->rows()));
        at += p->rows();
      }
    };
    return n;
  }

  N* concat_cols(const std::vector<N*>& parts) {
    N* n = fresh();
    Eigen::Index cols = 0;
    const Eigen::Index rows = parts.front()->rows();
    for (N* p : parts) {
      cols += p->cols();
      n->needs_grad = n->needs_grad || p->needs_grad;
    }
    n->val.resize(rows, cols);
    Eigen::Index at = 0;
    for (N* p : parts) {
      n->val.middleCols(at, p->cols()) = p->val;
      at += p->cols();
    }
    std::vector<N*> ps = parts;
    n->bw = [n, ps]() {
      Eigen::Index at = 0;
      for (N* p : ps) {
        if (p->needs_grad) accum(p, n->grad.middleCols(at, p->cols()));
        at += p->cols();
      }
    };
    return n;
  }

  // --- activations ---

  N* silu(N* a) {
    N* n = unary(a);
    n->val = a->val.unaryExpr([](S x) { return x / (S(1) + std::exp(-x)); });
    n->bw = [n, a]() {
      if (!a->needs_grad) return;
      Mt d = a->val.unaryExpr([](S x) {
        const S s = S(1) / (S(1) + std::exp(-x));
        return s * (S(1) + x * (S(1) - s));
      });
      accum(a, n->grad.cwiseProduct(d));
    };
    return n;
  }

  N* gelu(N* a) {
    N* n = unary(a);
    n->val = a->val.unaryExpr([](S x) {
      return S(0.5) * x * (S(1) + std::erf(x * S(M_SQRT1_2)));
    });
    n->bw = [n, a]() {
      if (!a->needs_grad) return;
      Mt d = a->val.unaryExpr([](S x) {
        const S cdf = S(0.5) * (S(1) + std::erf(x * S(M_SQRT1_2)));
        const S pdf = std::exp(S(-0.5) * x * x) * S(0.3989422804014327);
        return cdf + x * pdf;
      });
      accum(a, n->grad.cwiseProduct(d));
    };
    return n;
  }

  // Row-wise softmax; a may contain large negative additive mask values.
  N* softmax_rows(N* a) {
    N* n = unary(a);
    n->val.resizeLike(a->val);
    for (Eigen::Index r = 0; r < a->rows(); ++r) {
      const S mx = a->val.row(r).maxCoeff();
      Eigen::Array<S, 1, Eigen::Dynamic> e = (a->val.row(r).array() - mx).exp();
      n->val.row(r) = (e / e.sum()).matrix();
    }
    n->bw = [n, a]() {
      if (!a->needs_grad) return;
      Mt d(n->val.rows(), n->val.cols());
      for (Eigen::Index r = 0; r < n->val.rows(); ++r) {
        const S dot = n->grad.row(r).dot(n->val.row(r));
        d.row(r) =
            n->val.row(r).cwiseProduct(n->grad.row(r).array().matrix() -
                                       Mt::Constant(1, n->val.cols(), dot));
      }
      accum(a, d);
    };
    return n;
  }

  // Row-wise layer norm with learned gain/bias (1 x C parameters).
  N* layer_norm(N* x, N* gain, N* bias, S eps = S(1e-5)) {
    N* n = fresh();
    n->needs_grad = x->needs_grad || gain->needs_grad || bias->needs_grad;
    const Eigen::Index rows = x->rows(), cols = x->cols();
    // Cache normalized values and inverse stddev for backward.
    auto xhat = std::make_shared<Mt>(rows, cols);
    auto inv_std = std::make_shared<Eigen::Matrix<S, Eigen::Dynamic, 1>>(rows);
    n->val.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const S mean = x->val.row(r).mean();
      Eigen::Array<S, 1, Eigen::Dynamic> c = x->val.row(r).array() - mean;
      const S var = c.square().mean();
      const S is = S(1) / std::sqrt(var + eps);
      (*inv_std)(r) = is;
      xhat->row(r) = (c * is).matrix();
      n->val.row(r) =
          xhat->row(r).cwiseProduct(gain->val.row(0)) + bias->val.row(0);
    }
    n->bw = [n, x, gain, bias, xhat, inv_std]() {
      const Eigen::Index rows = n->val.rows(), cols = n->val.cols();
      if (gain->needs_grad) {
        accum(gain, (n->grad.cwiseProduct(*xhat)).colwise().sum());
      }
      if (bias->needs_grad) accum(bias, n->grad.colwise().sum());
      if (x->needs_grad) {
        Mt dx(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r) {
          // dxhat = dy * gain
          Eigen::Array<S, 1, Eigen::Dynamic> dxh =
              n->grad.row(r).cwiseProduct(gain->val.row(0)).array();
          const S m1 = dxh.mean();
          const S m2 = (dxh * xhat->row(r).array()).mean();
          dx.row(r) = (((dxh - m1) - xhat->row(r).array() * m2) * (*inv_std)(r))
                          .matrix();
        }
        accum(x, dx);
      }
    };
    return n;
  }

  // Mean of squared error over all entries, optionally weighted: the loss is
  // sum(w .* (p - t)^2) / sum(w). A null weight means all-ones.
  N* mse(N* pred, const Mt& target, const Mt* weight = nullptr) {
    N* n = unary(pred);
    auto diff = std::make_shared<Mt>(pred->val - target);
    S wsum;
    auto w = std::make_shared<Mt>();
    if (weight != nullptr) {
      *w = *weight;
      wsum = w->sum();
      n->val = Mt::Constant(1, 1, diff->cwiseProduct(*w).cwiseProduct(*diff).sum() / wsum);
    } else {
      wsum = static_cast<S>(pred->val.size());
      n->val = Mt::Constant(1, 1, diff->array().square().sum() / wsum);
    }
    n->bw = [n, pred, diff, w, wsum]() {
      if (!pred->needs_grad) return;
      const S g = n->grad(0, 0) * S(2) / wsum;
      if (w->size() > 0) {
        accum(pred, (diff->cwiseProduct(*w) * g));
      } else {
        accum(pred, (*diff * g));
      }
    };
    return n;
  }

  // Row-wise L2 normalization (safe at eps).
  N* l2_normalize_rows(N* a, S eps = S(1e-12)) {
    N* n = unary(a);
    const Eigen::Index rows = a->rows();
    auto inv_norm = std::make_shared<Eigen::Matrix<S, Eigen::Dynamic, 1>>(rows);
    n->val.resizeLike(a->val);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const S nm = std::max(a->val.row(r).norm(), eps);
      (*inv_norm)(r) = S(1) / nm;
      n->val.row(r) = a->val.row(r) * (*inv_norm)(r);
    }
    n->bw = [n, a, inv_norm]() {
      if (!a->needs_grad) return;
      Mt dx(n->val.rows(), n->val.cols());
      for (Eigen::Index r = 0; r < n->val.rows(); ++r) {
        const S dot = n->grad.row(r).dot(n->val.row(r));
        dx.row(r) = (n->grad.row(r) - n->val.row(r) * dot) * (*inv_norm)(r);
      }
      accum(a, dx);
    };
    return n;
  }

  N* mean_rows(N* a) {
    N* n = unary(a);
    n->val = a->val.colwise().mean();
    n->bw = [n, a]() {
      if (!a->needs_grad) return;
      ensure_zero(a);
      a->grad.rowwise() += n->grad.row(0) / static_cast<S>(a->rows());
    };
    return n;
  }

  // Symmetric InfoNCE over a square similarity matrix (already divided by the
  // temperature). mask(i,j)=false removes pair j as a negative for anchor i
  // (and i for j); the diagonal is always a positive.
  N* info_nce(N* sim, const std::vector<std::vector<bool>>& mask) {
    N* n = unary(sim);
    const Eigen::Index k = sim->rows();
    auto prow = std::make_shared<Mt>(k, k);
    auto pcol = std::make_shared<Mt>(k, k);
    Mt masked = sim->val;
    for (Eigen::Index i = 0; i < k; ++i) {
      for (Eigen::Index j = 0; j < k; ++j) {
        if (i != j && !mask[i][j]) masked(i, j) = S(-1e9);
      }
    }
    S loss = 0;
    for (Eigen::Index i = 0; i < k; ++i) {
      // Row-wise (anchor = row) softmax.
      const S mx = masked.row(i).maxCoeff();
      Eigen::Array<S, 1, Eigen::Dynamic> e = (masked.row(i).array() - mx).exp();
      prow->row(i) = (e / e.sum()).matrix();
      loss -= std::log(std::max((*prow)(i, i), S(1e-30)));
      // Column-wise (anchor = column).
      const S mxc = masked.col(i).maxCoeff();
      Eigen::Array<S, Eigen::Dynamic, 1> ec = (masked.col(i).array() - mxc).exp();
      pcol->col(i) = (ec / ec.sum()).matrix();
      loss -= std::log(std::max((*pcol)(i, i), S(1e-30)));
    }
    n->val = Mt::Constant(1, 1, loss / (S(2) * static_cast<S>(k)));
    n->bw = [n, sim, prow, pcol, k]() {
      if (!sim->needs_grad) return;
      const S g = n->grad(0, 0) / (S(2) * static_cast<S>(k));
      Mt d = *prow + *pcol;
      for (Eigen::Index i = 0; i < k; ++i) d(i, i) -= S(2);
      accum(sim, d * g);
    };
    return n;
  }

  void backward(N* loss) {
    if (loss->val.size() != 1) throw ShapeError("backward: loss must be scalar");
    loss->grad = Mt::Constant(1, 1, S(1));
    for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
      N& n = *it;
      if (n.bw && n.grad.size() > 0) n.bw();
    }
  }

  // Parameter gradients accumulated by the most recent backward().
  std::vector<Mt> param_grads;

  std::size_t node_count() const { return nodes_.size(); }

 private:
  N* fresh() {
    nodes_.emplace_back();
    return &nodes_.back();
  }

  N* unary(N* a) {
    N* n = fresh();
    n->needs_grad = a->needs_grad;
    return n;
  }

  N* binary(N* a, N* b) {
    N* n = fresh();
    n->needs_grad = a->needs_grad || b->needs_grad;
    return n;
  }

  template <typename D>
  static void accum(N* p, const Eigen::MatrixBase<D>& g) {
    if (p->grad.size() == 0) {
      p->grad = g;
    } else {
      p->grad += g;
    }
  }

  static void ensure_zero(N* p) {
    if (p->grad.size() == 0) p->grad = Mt::Zero(p->val.rows(), p->val.cols());
  }

  Mt& param_grad_slot(int idx, Eigen::Index rows, Eigen::Index cols) {
    if (idx >= static_cast<int>(param_grads.size())) {
      param_grads.resize(idx + 1);
    }
    Mt& g = param_grads[idx];
    if (g.size() == 0) g = Mt::Zero(rows, cols);
    return g;
  }

  template <typename D>
  void accum_param(int idx, Eigen::Index rows, Eigen::Index cols,
                   const Eigen::MatrixBase<D>& g) {
    param_grad_slot(idx, rows, cols) += g;
  }

  std::deque<N> nodes_;
};

}  // namespace motedit::nn
