#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace palm::ad {

class Tape;

// Handle to a scalar value recorded on a tape.
struct Var {
  Tape* tape = nullptr;
  std::int32_t idx = -1;
};

struct TapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reverse-mode tape over elementary scalar operations. Values are recorded in
// program order; a reverse sweep accumulates adjoints of one recorded scalar
// into every leaf. Recording a non-finite intermediate throws a TapeError
// naming the operation.
class Tape {
 public:
  enum class Op : std::uint8_t {
    Leaf, Const, Add, Sub, Mul, Div, Neg, Sin, Cos, Exp, Log, Tanh, Sigmoid, Sqrt, Sqr, Abs
  };

  Var leaf(double v);
  Var constant(double v);

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_leaves() const { return leaves_.size(); }
  double value(Var x) const { return nodes_[x.idx].val; }

  // Adjoints of y with respect to every leaf, in leaf creation order.
  std::vector<double> gradient(Var y) const;

  // Recomputes every node from the recorded operations and returns the value
  // of y. Bit-identical to the recorded value.
  double replay(Var y) const;

  void clear() { nodes_.clear(); leaves_.clear(); }

  Var binary(Op op, Var a, Var b);
  Var unary(Op op, Var a);

  static const char* op_name(Op op);

 private:
  struct Node {
    Op op;
    std::int32_t a = -1, b = -1;
    double val = 0.0;
  };

  double eval_node(const Node& n, double a, double b) const;
  Var push(Op op, std::int32_t a, std::int32_t b, double val);

  std::vector<Node> nodes_;
  std::vector<std::int32_t> leaves_;
};

Var operator+(Var a, Var b);
Var operator-(Var a, Var b);
Var operator*(Var a, Var b);
Var operator/(Var a, Var b);
Var operator-(Var a);
Var operator+(Var a, double c);
Var operator+(double c, Var a);
Var operator-(Var a, double c);
Var operator-(double c, Var a);
Var operator*(Var a, double c);
Var operator*(double c, Var a);
Var operator/(Var a, double c);
Var sin(Var a);
Var cos(Var a);
Var exp(Var a);
Var log(Var a);
Var tanh(Var a);
Var sigmoid(Var a);
Var sqrt(Var a);
Var sqr(Var a);
Var abs(Var a);

}  // namespace palm::ad
