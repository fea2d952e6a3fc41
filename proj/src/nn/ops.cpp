#include "duvio/nn/ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "duvio/core/error.hpp"
#include "duvio/kernels/conv.hpp"
#include "duvio/kernels/gemm.hpp"

namespace duvio::nn {

namespace {

// Gradient buffer of parent i, or nullptr when that parent takes no gradient.
Tensor* parent_grad(Node& self, std::size_t i) {
  auto& p = self.parents[i];
  return (p && p->requires_grad) ? &p->grad_buffer() : nullptr;
}

const Tensor& parent_value(const Node& self, std::size_t i) { return self.parents[i]->value; }

void add_into(Tensor& dst, const Tensor& src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

void require_rank(const Var& v, std::size_t rank, const char* op) {
  if (v.value().rank() != rank) {
    throw ShapeError(fmt::format("{}: expected rank {}, got {}", op, rank, to_string(v.shape())));
  }
}

void require_same(const Var& a, const Var& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw ShapeError(
        fmt::format("{}: shape mismatch {} vs {}", op, to_string(a.shape()), to_string(b.shape())));
  }
}

std::size_t product(const Shape& s, std::size_t from, std::size_t to) {
  std::size_t p = 1;
  for (std::size_t i = from; i < to; ++i) p *= s[i];
  return p;
}

template <typename F, typename DF>
Var unary(const Var& a, F f, DF df) {
  Tensor out(a.shape());
  const Tensor& x = a.value();
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = f(x[i]);
  return make_op(std::move(out), {a}, [df](Node& self) {
    if (Tensor* dx = parent_grad(self, 0)) {
      const Tensor& x = parent_value(self, 0);
      for (std::size_t i = 0; i < x.size(); ++i) (*dx)[i] += self.grad[i] * df(x[i], self.value[i]);
    }
  });
}

double stable_sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Var conv2d(const Var& x, const Var& w, const Var& b, const Conv2dOptions& opts) {
  require_rank(x, 4, "conv2d input");
  require_rank(w, 4, "conv2d weight");
  kernels::Conv2dGeometry g;
  g.batch = x.dim(0);
  g.in_channels = x.dim(1);
  g.in_h = x.dim(2);
  g.in_w = x.dim(3);
  g.out_channels = w.dim(0);
  g.kernel_h = w.dim(2);
  g.kernel_w = w.dim(3);
  g.stride_h = opts.stride_h;
  g.stride_w = opts.stride_w;
  g.pad_h = opts.pad_h;
  g.pad_w = opts.pad_w;
  g.groups = opts.groups;
  if (w.dim(1) * opts.groups != g.in_channels) {
    throw ShapeError(fmt::format("conv2d: weight {} does not accept {} input channels",
                                 to_string(w.shape()), g.in_channels));
  }
  g.validate();
  Tensor out({g.batch, g.out_channels, g.out_h(), g.out_w()});
  kernels::conv2d_forward(g, x.value().values(), w.value().values(),
                          b.defined() ? b.value().values() : std::span<const double>{},
                          out.values());
  return make_op(std::move(out), {x, w, b}, [g](Node& self) {
    if (Tensor* dx = parent_grad(self, 0)) {
      Tensor tmp(dx->shape());
      kernels::conv2d_backward_input(g, self.grad.values(), parent_value(self, 1).values(),
                                     tmp.values());
      add_into(*dx, tmp);
    }
    Tensor* dw = parent_grad(self, 1);
    Tensor* db = self.parents[2] ? parent_grad(self, 2) : nullptr;
    if (dw || db) {
      Tensor tw(parent_value(self, 1).shape());
      Tensor tb(Shape{g.out_channels});
      kernels::conv2d_backward_weight(g, parent_value(self, 0).values(), self.grad.values(),
                                      tw.values(), tb.values());
      if (dw) add_into(*dw, tw);
      if (db) add_into(*db, tb);
    }
  });
}

Var conv_transpose2d(const Var& x, const Var& w, const Var& b, std::size_t stride,
                     std::size_t pad, std::size_t output_padding) {
  require_rank(x, 4, "conv_transpose2d input");
  require_rank(w, 4, "conv_transpose2d weight");
  if (w.dim(0) != x.dim(1)) {
    throw ShapeError(fmt::format("conv_transpose2d: weight {} does not accept {} channels",
                                 to_string(w.shape()), x.dim(1)));
  }
  if (output_padding >= stride) throw ShapeError("conv_transpose2d: output_padding >= stride");
  const std::size_t k_h = w.dim(2), k_w = w.dim(3);
  const std::size_t h = x.dim(2), wd = x.dim(3);
  if ((h - 1) * stride + k_h + output_padding < 2 * pad + 1) {
    throw ShapeError("conv_transpose2d: empty output");
  }
  // The transposed op is the adjoint of a forward conv from the output
  // geometry back to the input geometry.
  kernels::Conv2dGeometry g;
  g.batch = x.dim(0);
  g.in_channels = w.dim(1);
  g.in_h = (h - 1) * stride + k_h + output_padding - 2 * pad;
  g.in_w = (wd - 1) * stride + k_w + output_padding - 2 * pad;
  g.out_channels = x.dim(1);
  g.kernel_h = k_h;
  g.kernel_w = k_w;
  g.stride_h = g.stride_w = stride;
  g.pad_h = g.pad_w = pad;
  g.validate();
  if (g.out_h() != h || g.out_w() != wd) throw ShapeError("conv_transpose2d: geometry mismatch");

  Tensor out({g.batch, g.in_channels, g.in_h, g.in_w});
  kernels::conv2d_backward_input(g, x.value().values(), w.value().values(), out.values());
  const std::size_t spatial = g.in_h * g.in_w;
  if (b.defined()) {
    for (std::size_t n = 0; n < g.batch; ++n)
      for (std::size_t c = 0; c < g.in_channels; ++c)
        for (std::size_t s = 0; s < spatial; ++s)
          out[(n * g.in_channels + c) * spatial + s] += b.value()[c];
  }
  return make_op(std::move(out), {x, w, b}, [g, spatial](Node& self) {
    if (Tensor* dx = parent_grad(self, 0)) {
      Tensor tmp(dx->shape());
      kernels::conv2d_forward(g, self.grad.values(), parent_value(self, 1).values(), {},
                              tmp.values());
      add_into(*dx, tmp);
    }
    if (Tensor* dw = parent_grad(self, 1)) {
      Tensor tw(dw->shape());
      kernels::conv2d_backward_weight(g, self.grad.values(), parent_value(self, 0).values(),
                                      tw.values(), {});
      add_into(*dw, tw);
    }
    if (Tensor* db = self.parents[2] ? parent_grad(self, 2) : nullptr) {
      for (std::size_t n = 0; n < g.batch; ++n)
        for (std::size_t c = 0; c < g.in_channels; ++c) {
          double acc = 0.0;
          for (std::size_t s = 0; s < spatial; ++s)
            acc += self.grad[(n * g.in_channels + c) * spatial + s];
          (*db)[c] += acc;
        }
    }
  });
}

Var conv1d(const Var& x, const Var& w, const Var& b, std::size_t stride, std::size_t pad) {
  require_rank(x, 3, "conv1d input");
  require_rank(w, 3, "conv1d weight");
  const Var x4 = reshape(x, {x.dim(0), x.dim(1), 1, x.dim(2)});
  const Var w4 = reshape(w, {w.dim(0), w.dim(1), 1, w.dim(2)});
  const Var y = conv2d(x4, w4, b, Conv2dOptions{1, stride, 0, pad, 1});
  return reshape(y, {y.dim(0), y.dim(1), y.dim(3)});
}

Var linear(const Var& x, const Var& w, const Var& b) {
  require_rank(x, 2, "linear input");
  require_rank(w, 2, "linear weight");
  const std::size_t n = x.dim(0), in = x.dim(1), out_dim = w.dim(0);
  if (w.dim(1) != in) {
    throw ShapeError(fmt::format("linear: weight {} does not accept input {}",
                                 to_string(w.shape()), to_string(x.shape())));
  }
  Tensor out({n, out_dim});
  kernels::gemm(false, true, n, out_dim, in, 1.0, x.value().values(), w.value().values(), 0.0,
                out.values());
  if (b.defined()) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t o = 0; o < out_dim; ++o) out[i * out_dim + o] += b.value()[o];
  }
  return make_op(std::move(out), {x, w, b}, [n, in, out_dim](Node& self) {
    if (Tensor* dx = parent_grad(self, 0)) {
      kernels::gemm(false, false, n, in, out_dim, 1.0, self.grad.values(),
                    parent_value(self, 1).values(), 1.0, dx->values());
    }
    if (Tensor* dw = parent_grad(self, 1)) {
      kernels::gemm(true, false, out_dim, in, n, 1.0, self.grad.values(),
                    parent_value(self, 0).values(), 1.0, dw->values());
    }
    if (Tensor* db = self.parents[2] ? parent_grad(self, 2) : nullptr) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t o = 0; o < out_dim; ++o) (*db)[o] += self.grad[i * out_dim + o];
    }
  });
}

Var bmm(const Var& a, const Var& b) {
  require_rank(a, 3, "bmm lhs");
  require_rank(b, 3, "bmm rhs");
  const std::size_t bs = a.dim(0), m = a.dim(1), k = a.dim(2), n = b.dim(2);
  if (b.dim(0) != bs || b.dim(1) != k) {
    throw ShapeError(fmt::format("bmm: {} x {}", to_string(a.shape()), to_string(b.shape())));
  }
  Tensor out({bs, m, n});
  for (std::size_t i = 0; i < bs; ++i) {
    kernels::gemm(false, false, m, n, k, 1.0, a.value().values().subspan(i * m * k, m * k),
                  b.value().values().subspan(i * k * n, k * n), 0.0,
                  out.values().subspan(i * m * n, m * n));
  }
  return make_op(std::move(out), {a, b}, [bs, m, k, n](Node& self) {
    Tensor* da = parent_grad(self, 0);
    Tensor* db = parent_grad(self, 1);
    for (std::size_t i = 0; i < bs; ++i) {
      auto dy = self.grad.values().subspan(i * m * n, m * n);
      if (da) {
        kernels::gemm(false, true, m, k, n, 1.0, dy,
                      parent_value(self, 1).values().subspan(i * k * n, k * n), 1.0,
                      da->values().subspan(i * m * k, m * k));
      }
      if (db) {
        kernels::gemm(true, false, k, n, m, 1.0,
                      parent_value(self, 0).values().subspan(i * m * k, m * k), dy, 1.0,
                      db->values().subspan(i * k * n, k * n));
      }
    }
  });
}

Var add(const Var& a, const Var& b) {
  require_same(a, b, "add");
  Tensor out = a.value();
  add_into(out, b.value());
  return make_op(std::move(out), {a, b}, [](Node& self) {
    if (Tensor* da = parent_grad(self, 0)) add_into(*da, self.grad);
    if (Tensor* db = parent_grad(self, 1)) add_into(*db, self.grad);
  });
}

Var sub(const Var& a, const Var& b) {
  require_same(a, b, "sub");
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b.value()[i];
  return make_op(std::move(out), {a, b}, [](Node& self) {
    if (Tensor* da = parent_grad(self, 0)) add_into(*da, self.grad);
    if (Tensor* db = parent_grad(self, 1))
      for (std::size_t i = 0; i < db->size(); ++i) (*db)[i] -= self.grad[i];
  });
}

Var mul(const Var& a, const Var& b) {
  require_same(a, b, "mul");
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b.value()[i];
  return make_op(std::move(out), {a, b}, [](Node& self) {
    if (Tensor* da = parent_grad(self, 0)) {
      const Tensor& bv = parent_value(self, 1);
      for (std::size_t i = 0; i < da->size(); ++i) (*da)[i] += self.grad[i] * bv[i];
    }
    if (Tensor* db = parent_grad(self, 1)) {
      const Tensor& av = parent_value(self, 0);
      for (std::size_t i = 0; i < db->size(); ++i) (*db)[i] += self.grad[i] * av[i];
    }
  });
}

Var scale(const Var& a, double s) {
  return unary(a, [s](double x) { return s * x; }, [s](double, double) { return s; });
}

Var leaky_relu(const Var& a, double slope) {
  return unary(
      a, [slope](double x) { return x > 0 ? x : slope * x; },
      [slope](double x, double) { return x > 0 ? 1.0 : slope; });
}

Var relu(const Var& a) { return leaky_relu(a, 0.0); }

Var sigmoid(const Var& a) {
  return unary(a, stable_sigmoid, [](double, double y) { return y * (1.0 - y); });
}

Var tanh(const Var& a) {
  return unary(a, [](double x) { return std::tanh(x); }, [](double, double y) { return 1.0 - y * y; });
}

Var softmax_last(const Var& a) {
  const std::size_t cols = a.shape().back();
  const std::size_t rows = a.value().size() / cols;
  Tensor out(a.shape());
  for (std::size_t r = 0; r < rows; ++r) {
    const double* x = a.value().data() + r * cols;
    double* y = out.data() + r * cols;
    const double mx = *std::max_element(x, x + cols);
    double s = 0.0;
    for (std::size_t c = 0; c < cols; ++c) s += (y[c] = std::exp(x[c] - mx));
    for (std::size_t c = 0; c < cols; ++c) y[c] /= s;
  }
  return make_op(std::move(out), {a}, [rows, cols](Node& self) {
    if (Tensor* dx = parent_grad(self, 0)) {
      for (std::size_t r = 0; r < rows; ++r) {
        const double* y = self.value.data() + r * cols;
        const double* dy = self.grad.data() + r * cols;
        double dot = 0.0;
        for (std::size_t c = 0; c < cols; ++c) dot += dy[c] * y[c];
        for (std::size_t c = 0; c < cols; ++c) (*dx)[r * cols + c] += y[c] * (dy[c] - dot);
      }
    }
  });
}

Var reshape(const Var& a, Shape shape) {
  Tensor out = a.value().reshaped(std::move(shape));
  return make_op(std::move(out), {a}, [](Node& self) {
    if (Tensor* dx = parent_grad(self, 0)) add_into(*dx, self.grad);
  });
}

Var flatten(const Var& a) {
  const std::size_t n = a.dim(0);
  return reshape(a, {n, a.value().size() / std::max<std::size_t>(n, 1)});
}

Var concat(const std::vector<Var>& parts, std::size_t axis) {
  if (parts.empty()) throw ShapeError("concat: no inputs");
  Shape shape = parts.front().shape();
  if (axis >= shape.size()) throw ShapeError("concat: axis out of range");
  std::size_t total = 0;
  for (const auto& p : parts) {
    Shape s = p.shape();
    if (s.size() != shape.size()) throw ShapeError("concat: rank mismatch");
    total += s[axis];
    s[axis] = shape[axis];
    if (s != shape) throw ShapeError("concat: shape mismatch off the concat axis");
  }
  const std::size_t outer = product(shape, 0, axis);
  const std::size_t inner = product(shape, axis + 1, shape.size());
  shape[axis] = total;
  Tensor out(shape);
  std::vector<std::size_t> widths;
  for (const auto& p : parts) widths.push_back(p.dim(axis) * inner);
  const std::size_t row = total * inner;
  std::size_t offset = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const double* src = parts[k].value().data();
    for (std::size_t o = 0; o < outer; ++o)
      std::copy(src + o * widths[k], src + (o + 1) * widths[k], out.data() + o * row + offset);
    offset += widths[k];
  }
  return make_op(std::move(out), parts, [outer, row, widths](Node& self) {
    std::size_t off = 0;
    for (std::size_t k = 0; k < widths.size(); ++k) {
      if (Tensor* dx = parent_grad(self, k)) {
        for (std::size_t o = 0; o < outer; ++o)
          for (std::size_t i = 0; i < widths[k]; ++i)
            (*dx)[o * widths[k] + i] += self.grad[o * row + off + i];
      }
      off += widths[k];
    }
  });
}

Var narrow(const Var& a, std::size_t axis, std::size_t start, std::size_t length) {
  Shape shape = a.shape();
  if (axis >= shape.size() || start + length > shape[axis]) {
    throw ShapeError(fmt::format("narrow: [{}, {}) out of range on axis {} of {}", start,
                                 start + length, axis, to_string(shape)));
  }
  const std::size_t outer = product(shape, 0, axis);
  const std::size_t inner = product(shape, axis + 1, shape.size());
  const std::size_t src_row = shape[axis] * inner;
  const std::size_t width = length * inner;
  const std::size_t offset = start * inner;
  shape[axis] = length;
  Tensor out(shape);
  for (std::size_t o = 0; o < outer; ++o)
    std::copy(a.value().data() + o * src_row + offset,
              a.value().data() + o * src_row + offset + width, out.data() + o * width);
  return make_op(std::move(out), {a}, [outer, src_row, width, offset](Node& self) {
    if (Tensor* dx = parent_grad(self, 0)) {
      for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t i = 0; i < width; ++i)
          (*dx)[o * src_row + offset + i] += self.grad[o * width + i];
    }
  });
}

Var gather(const Var& a, std::vector<std::size_t> index, Shape out_shape) {
  if (numel(out_shape) != index.size()) throw ShapeError("gather: index/shape size mismatch");
  Tensor out(std::move(out_shape));
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] >= a.value().size()) throw ShapeError("gather: index out of range");
    out[i] = a.value()[index[i]];
  }
  return make_op(std::move(out), {a}, [index = std::move(index)](Node& self) {
    if (Tensor* dx = parent_grad(self, 0))
      for (std::size_t i = 0; i < index.size(); ++i) (*dx)[index[i]] += self.grad[i];
  });
}

Var permute(const Var& a, const std::vector<std::size_t>& axes) {
  const Shape& in = a.shape();
  const std::size_t rank = in.size();
  if (axes.size() != rank) throw ShapeError("permute: wrong number of axes");
  std::vector<std::size_t> in_stride(rank, 1);
  for (std::size_t d = rank; d-- > 1;) in_stride[d - 1] = in_stride[d] * in[d];
  Shape out_shape(rank);
  for (std::size_t d = 0; d < rank; ++d) out_shape[d] = in.at(axes[d]);
  std::vector<std::size_t> index(a.value().size());
  std::vector<std::size_t> coord(rank, 0);
  for (std::size_t i = 0; i < index.size(); ++i) {
    std::size_t src = 0;
    for (std::size_t d = 0; d < rank; ++d) src += coord[d] * in_stride[axes[d]];
    index[i] = src;
    for (std::size_t d = rank; d-- > 0;) {
      if (++coord[d] < out_shape[d]) break;
      coord[d] = 0;
    }
  }
  return gather(a, std::move(index), std::move(out_shape));
}

Var batch_norm(const Var& x, const Var& gamma, const Var& beta, Var& running_mean,
               Var& running_var, bool training, double momentum, double eps) {
  if (x.value().rank() < 2) throw ShapeError("batch_norm: rank < 2");
  const std::size_t n = x.dim(0), c = x.dim(1);
  const std::size_t s = product(x.shape(), 2, x.value().rank());
  const std::size_t count = n * s;
  if (gamma.value().size() != c) throw ShapeError("batch_norm: channel mismatch");
  std::vector<double> mu(c), inv_std(c);
  const Tensor& xv = x.value();
  if (training) {
    for (std::size_t ch = 0; ch < c; ++ch) {
      double m = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < s; ++j) m += xv[(i * c + ch) * s + j];
      m /= static_cast<double>(count);
      double v = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < s; ++j) {
          const double d = xv[(i * c + ch) * s + j] - m;
          v += d * d;
        }
      const double biased = v / static_cast<double>(count);
      const double unbiased = count > 1 ? v / static_cast<double>(count - 1) : biased;
      mu[ch] = m;
      inv_std[ch] = 1.0 / std::sqrt(biased + eps);
      running_mean.mutable_value()[ch] =
          (1 - momentum) * running_mean.value()[ch] + momentum * m;
      running_var.mutable_value()[ch] =
          (1 - momentum) * running_var.value()[ch] + momentum * unbiased;
    }
  } else {
    for (std::size_t ch = 0; ch < c; ++ch) {
      mu[ch] = running_mean.value()[ch];
      inv_std[ch] = 1.0 / std::sqrt(running_var.value()[ch] + eps);
    }
  }
  Tensor xhat(x.shape());
  Tensor out(x.shape());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t ch = 0; ch < c; ++ch)
      for (std::size_t j = 0; j < s; ++j) {
        const std::size_t k = (i * c + ch) * s + j;
        xhat[k] = (xv[k] - mu[ch]) * inv_std[ch];
        out[k] = gamma.value()[ch] * xhat[k] + beta.value()[ch];
      }
  return make_op(std::move(out), {x, gamma, beta},
                 [n, c, s, count, training, inv_std, xhat = std::move(xhat)](Node& self) {
                   const Tensor& dy = self.grad;
                   const Tensor& g = parent_value(self, 1);
                   std::vector<double> sum_dy(c, 0.0), sum_dy_xhat(c, 0.0);
                   for (std::size_t i = 0; i < n; ++i)
                     for (std::size_t ch = 0; ch < c; ++ch)
                       for (std::size_t j = 0; j < s; ++j) {
                         const std::size_t k = (i * c + ch) * s + j;
                         sum_dy[ch] += dy[k];
                         sum_dy_xhat[ch] += dy[k] * xhat[k];
                       }
                   if (Tensor* dx = parent_grad(self, 0)) {
                     const auto m = static_cast<double>(count);
                     for (std::size_t i = 0; i < n; ++i)
                       for (std::size_t ch = 0; ch < c; ++ch)
                         for (std::size_t j = 0; j < s; ++j) {
                           const std::size_t k = (i * c + ch) * s + j;
                           const double scale_c = g[ch] * inv_std[ch];
                           (*dx)[k] += training ? scale_c * (dy[k] - sum_dy[ch] / m -
                                                             xhat[k] * sum_dy_xhat[ch] / m)
                                                : scale_c * dy[k];
                         }
                   }
                   if (Tensor* dg = parent_grad(self, 1))
                     for (std::size_t ch = 0; ch < c; ++ch) (*dg)[ch] += sum_dy_xhat[ch];
                   if (Tensor* db = parent_grad(self, 2))
                     for (std::size_t ch = 0; ch < c; ++ch) (*db)[ch] += sum_dy[ch];
                 });
}

Var global_avg_pool(const Var& x) {
  require_rank(x, 4, "global_avg_pool");
  const std::size_t n = x.dim(0), c = x.dim(1), s = x.dim(2) * x.dim(3);
  Tensor out({n, c});
  for (std::size_t i = 0; i < n * c; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < s; ++j) acc += x.value()[i * s + j];
    out[i] = acc / static_cast<double>(s);
  }
  return make_op(std::move(out), {x}, [n, c, s](Node& self) {
    if (Tensor* dx = parent_grad(self, 0))
      for (std::size_t i = 0; i < n * c; ++i)
        for (std::size_t j = 0; j < s; ++j)
          (*dx)[i * s + j] += self.grad[i] / static_cast<double>(s);
  });
}

Var resize_bilinear(const Var& x, std::size_t out_h, std::size_t out_w) {
  require_rank(x, 4, "resize_bilinear");
  const std::size_t planes = x.dim(0) * x.dim(1), in_h = x.dim(2), in_w = x.dim(3);
  struct Tap {
    std::size_t i0, i1;
    double w;
  };
  auto taps = [](std::size_t in, std::size_t out) {
    std::vector<Tap> t(out);
    const double sc = static_cast<double>(in) / static_cast<double>(out);
    for (std::size_t o = 0; o < out; ++o) {
      const double f =
          std::clamp((static_cast<double>(o) + 0.5) * sc - 0.5, 0.0, static_cast<double>(in - 1));
      const auto i0 = static_cast<std::size_t>(f);
      t[o] = {i0, std::min(i0 + 1, in - 1), f - static_cast<double>(i0)};
    }
    return t;
  };
  const auto ty = taps(in_h, out_h);
  const auto tx = taps(in_w, out_w);
  Tensor out({x.dim(0), x.dim(1), out_h, out_w});
  for (std::size_t p = 0; p < planes; ++p) {
    const double* src = x.value().data() + p * in_h * in_w;
    for (std::size_t y = 0; y < out_h; ++y)
      for (std::size_t xx = 0; xx < out_w; ++xx) {
        const auto& a = ty[y];
        const auto& b = tx[xx];
        const double top = (1 - b.w) * src[a.i0 * in_w + b.i0] + b.w * src[a.i0 * in_w + b.i1];
        const double bot = (1 - b.w) * src[a.i1 * in_w + b.i0] + b.w * src[a.i1 * in_w + b.i1];
        out[(p * out_h + y) * out_w + xx] = (1 - a.w) * top + a.w * bot;
      }
  }
  return make_op(std::move(out), {x}, [=](Node& self) {
    Tensor* dx = parent_grad(self, 0);
    if (!dx) return;
    for (std::size_t p = 0; p < planes; ++p) {
      double* dst = dx->data() + p * in_h * in_w;
      for (std::size_t y = 0; y < out_h; ++y)
        for (std::size_t xx = 0; xx < out_w; ++xx) {
          const double g = self.grad[(p * out_h + y) * out_w + xx];
          const auto& a = ty[y];
          const auto& b = tx[xx];
          dst[a.i0 * in_w + b.i0] += g * (1 - a.w) * (1 - b.w);
          dst[a.i0 * in_w + b.i1] += g * (1 - a.w) * b.w;
          dst[a.i1 * in_w + b.i0] += g * a.w * (1 - b.w);
          dst[a.i1 * in_w + b.i1] += g * a.w * b.w;
        }
    }
  });
}

Var sum(const Var& a) {
  const double s = std::accumulate(a.value().values().begin(), a.value().values().end(), 0.0);
  return make_op(Tensor({1}, s), {a}, [](Node& self) {
    if (Tensor* dx = parent_grad(self, 0))
      for (double& v : dx->values()) v += self.grad[0];
  });
}

Var mean(const Var& a) { return scale(sum(a), 1.0 / static_cast<double>(a.value().size())); }

Var l1_loss(const Var& prediction, const Var& target) {
  require_same(prediction, target, "l1_loss");
  const Tensor& p = prediction.value();
  const Tensor& t = target.value();
  const auto n = static_cast<double>(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - t[i]);
  return make_op(Tensor({1}, acc / n), {prediction, target}, [n](Node& self) {
    const Tensor& p = parent_value(self, 0);
    const Tensor& t = parent_value(self, 1);
    const double g = self.grad[0] / n;
    Tensor* dp = parent_grad(self, 0);
    Tensor* dt = parent_grad(self, 1);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double d = p[i] - t[i];
      const double sgn = d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0);
      if (dp) (*dp)[i] += g * sgn;
      if (dt) (*dt)[i] -= g * sgn;
    }
  });
}

Var mse_loss(const Var& prediction, const Var& target) {
  require_same(prediction, target, "mse_loss");
  const Tensor& p = prediction.value();
  const Tensor& t = target.value();
  const auto n = static_cast<double>(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += (p[i] - t[i]) * (p[i] - t[i]);
  return make_op(Tensor({1}, acc / n), {prediction, target}, [n](Node& self) {
    const Tensor& p = parent_value(self, 0);
    const Tensor& t = parent_value(self, 1);
    const double g = 2.0 * self.grad[0] / n;
    Tensor* dp = parent_grad(self, 0);
    Tensor* dt = parent_grad(self, 1);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (dp) (*dp)[i] += g * (p[i] - t[i]);
      if (dt) (*dt)[i] -= g * (p[i] - t[i]);
    }
  });
}

Var bce_with_logits(const Var& logits, double label) {
  const Tensor& z = logits.value();
  const auto n = static_cast<double>(z.size());
  double acc = 0.0;
  for (double v : z.values())
    acc += std::max(v, 0.0) - v * label + std::log1p(std::exp(-std::abs(v)));
  return make_op(Tensor({1}, acc / n), {logits}, [n, label](Node& self) {
    if (Tensor* dz = parent_grad(self, 0)) {
      const Tensor& z = parent_value(self, 0);
      for (std::size_t i = 0; i < z.size(); ++i)
        (*dz)[i] += self.grad[0] * (stable_sigmoid(z[i]) - label) / n;
    }
  });
}

}  // namespace duvio::nn
