#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "gpfrm/dataset.hpp"

namespace gpfrm {

enum class OpKind { Add, Sub, Mul, Div, Max, Min };

/// Expression node: a feature terminal, a constant terminal, or a binary
/// operator. Div is protected (returns 1 when |denominator| < 1e-9).
struct Node {
    enum class Type { Feature, Constant, Op };

    Type type = Type::Constant;
    int feature = -1;
    double value = 0.0;
    OpKind op = OpKind::Add;
    std::unique_ptr<Node> left;
    std::unique_ptr<Node> right;

    static std::unique_ptr<Node> make_feature(int index);
    static std::unique_ptr<Node> make_constant(double value);
    static std::unique_ptr<Node> make_op(OpKind kind, std::unique_ptr<Node> l,
                                         std::unique_ptr<Node> r);

    std::unique_ptr<Node> clone() const;
};

/// Owning expression tree with deep-copy value semantics.
struct ExprTree {
    std::unique_ptr<Node> root;

    ExprTree() = default;
    explicit ExprTree(std::unique_ptr<Node> r) : root(std::move(r)) {}
    ExprTree(const ExprTree& other) : root(other.root ? other.root->clone() : nullptr) {}
    ExprTree& operator=(const ExprTree& other) {
        if (this != &other) root = other.root ? other.root->clone() : nullptr;
        return *this;
    }
    ExprTree(ExprTree&&) = default;
    ExprTree& operator=(ExprTree&&) = default;
};

struct Output {
    std::vector<double> values;
    bool finite = true;
};

constexpr double kDivEpsilon = 1e-9;

int size(const ExprTree& tree);
int depth(const ExprTree& tree);
std::vector<int> features_used(const ExprTree& tree);  // sorted, unique

Output evaluate(const ExprTree& tree, const FeatureMatrix& matrix);

/// Reusable evaluator: holds scratch buffers so repeated evaluation of many
/// trees against the same matrix does not allocate per call.
class TreeEvaluator {
public:
    explicit TreeEvaluator(const FeatureMatrix& matrix);

    Output evaluate(const ExprTree& tree);

private:
    void eval_node(const Node& node, std::vector<double>& out, int level);
    std::vector<double>& scratch(int level);

    const FeatureMatrix* matrix_;
    std::vector<std::vector<double>> buffers_;
};

enum class RenderFormat { Infix, Sexpr, Dot };

/// Render a tree against feature names. Infix is fully parenthesised with
/// max/min as functions; ascii_ops swaps the UTF-8 "×"/"÷" for "*"/"/".
std::string render(const ExprTree& tree, const std::vector<std::string>& names,
                   RenderFormat format, bool ascii_ops = false);

/// Parse the prefix form produced by render(Sexpr). Feature terminals are
/// resolved against `names`; numeric literals become constants.
ExprTree parse_sexpr(const std::string& text, const std::vector<std::string>& names);

}  // namespace gpfrm
