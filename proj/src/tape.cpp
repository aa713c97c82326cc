#include "palm/ad/tape.hpp"

#include <cmath>

namespace palm::ad {

const char* Tape::op_name(Op op) {
  switch (op) {
    case Op::Leaf: return "leaf";
    case Op::Const: return "const";
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::Mul: return "mul";
    case Op::Div: return "div";
    case Op::Neg: return "neg";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Tanh: return "tanh";
    case Op::Sigmoid: return "sigmoid";
    case Op::Sqrt: return "sqrt";
    case Op::Sqr: return "sqr";
    case Op::Abs: return "abs";
  }
  return "?";
}

Var Tape::push(Op op, std::int32_t a, std::int32_t b, double val) {
  if (!std::isfinite(val))
    throw TapeError(std::string("non-finite value produced by op '") + op_name(op) + "'");
  nodes_.push_back(Node{op, a, b, val});
  return Var{this, static_cast<std::int32_t>(nodes_.size() - 1)};
}

Var Tape::leaf(double v) {
  Var x = push(Op::Leaf, -1, -1, v);
  leaves_.push_back(x.idx);
  return x;
}

Var Tape::constant(double v) { return push(Op::Const, -1, -1, v); }

double Tape::eval_node(const Node& n, double a, double b) const {
  switch (n.op) {
    case Op::Leaf:
    case Op::Const: return n.val;
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Div: return a / b;
    case Op::Neg: return -a;
    case Op::Sin: return std::sin(a);
    case Op::Cos: return std::cos(a);
    case Op::Exp: return std::exp(a);
    case Op::Log: return std::log(a);
    case Op::Tanh: return std::tanh(a);
    case Op::Sigmoid: return 1.0 / (1.0 + std::exp(-a));
    case Op::Sqrt: return std::sqrt(a);
    case Op::Sqr: return a * a;
    case Op::Abs: return std::fabs(a);
  }
  return 0.0;
}

Var Tape::binary(Op op, Var a, Var b) {
  return push(op, a.idx, b.idx, eval_node(Node{op, a.idx, b.idx, 0.0}, nodes_[a.idx].val, nodes_[b.idx].val));
}

Var Tape::unary(Op op, Var a) {
  return push(op, a.idx, -1, eval_node(Node{op, a.idx, -1, 0.0}, nodes_[a.idx].val, 0.0));
}

std::vector<double> Tape::gradient(Var y) const {
  std::vector<double> adj(nodes_.size(), 0.0);
  adj[y.idx] = 1.0;
  for (std::int32_t i = y.idx; i >= 0; --i) {
    const double w = adj[i];
    if (w == 0.0) continue;
    const Node& n = nodes_[i];
    const double av = n.a >= 0 ? nodes_[n.a].val : 0.0;
    const double bv = n.b >= 0 ? nodes_[n.b].val : 0.0;
    switch (n.op) {
      case Op::Leaf:
      case Op::Const: break;
      case Op::Add: adj[n.a] += w; adj[n.b] += w; break;
      case Op::Sub: adj[n.a] += w; adj[n.b] -= w; break;
      case Op::Mul: adj[n.a] += w * bv; adj[n.b] += w * av; break;
      case Op::Div: adj[n.a] += w / bv; adj[n.b] -= w * av / (bv * bv); break;
      case Op::Neg: adj[n.a] -= w; break;
      case Op::Sin: adj[n.a] += w * std::cos(av); break;
      case Op::Cos: adj[n.a] -= w * std::sin(av); break;
      case Op::Exp: adj[n.a] += w * n.val; break;
      case Op::Log: adj[n.a] += w / av; break;
      case Op::Tanh: adj[n.a] += w * (1.0 - n.val * n.val); break;
      case Op::Sigmoid: adj[n.a] += w * n.val * (1.0 - n.val); break;
      case Op::Sqrt: adj[n.a] += w * 0.5 / n.val; break;
      case Op::Sqr: adj[n.a] += w * 2.0 * av; break;
      case Op::Abs: adj[n.a] += av < 0.0 ? -w : w; break;
    }
  }
  std::vector<double> out(leaves_.size());
  for (std::size_t k = 0; k < leaves_.size(); ++k) out[k] = adj[leaves_[k]];
  return out;
}

double Tape::replay(Var y) const {
  std::vector<double> vals(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    const double a = n.a >= 0 ? vals[n.a] : 0.0;
    const double b = n.b >= 0 ? vals[n.b] : 0.0;
    vals[i] = eval_node(n, a, b);
    if (!std::isfinite(vals[i]))
      throw TapeError(std::string("non-finite value in replay at op '") + op_name(n.op) + "'");
  }
  return vals[y.idx];
}

Var operator+(Var a, Var b) { return a.tape->binary(Tape::Op::Add, a, b); }
Var operator-(Var a, Var b) { return a.tape->binary(Tape::Op::Sub, a, b); }
Var operator*(Var a, Var b) { return a.tape->binary(Tape::Op::Mul, a, b); }
Var operator/(Var a, Var b) { return a.tape->binary(Tape::Op::Div, a, b); }
Var operator-(Var a) { return a.tape->unary(Tape::Op::Neg, a); }
Var operator+(Var a, double c) { return a + a.tape->constant(c); }
Var operator+(double c, Var a) { return a.tape->constant(c) + a; }
Var operator-(Var a, double c) { return a - a.tape->constant(c); }
Var operator-(double c, Var a) { return a.tape->constant(c) - a; }
Var operator*(Var a, double c) { return a * a.tape->constant(c); }
Var operator*(double c, Var a) { return a.tape->constant(c) * a; }
Var operator/(Var a, double c) { return a / a.tape->constant(c); }
Var sin(Var a) { return a.tape->unary(Tape::Op::Sin, a); }
Var cos(Var a) { return a.tape->unary(Tape::Op::Cos, a); }
Var exp(Var a) { return a.tape->unary(Tape::Op::Exp, a); }
Var log(Var a) { return a.tape->unary(Tape::Op::Log, a); }
Var tanh(Var a) { return a.tape->unary(Tape::Op::Tanh, a); }
Var sigmoid(Var a) { return a.tape->unary(Tape::Op::Sigmoid, a); }
Var sqrt(Var a) { return a.tape->unary(Tape::Op::Sqrt, a); }
Var sqr(Var a) { return a.tape->unary(Tape::Op::Sqr, a); }
Var abs(Var a) { return a.tape->unary(Tape::Op::Abs, a); }

}  // namespace palm::ad
