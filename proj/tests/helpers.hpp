#pragma once

// Shared test utilities: independent oracles and random generators. These
// deliberately avoid the library's vectorized evaluation path.

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "gpfrm/expr.hpp"
#include "gpfrm/genetics.hpp"

namespace gpfrm::testing {

/// Naive per-instance recursive interpreter (oracle for TreeEvaluator).
inline double eval_instance(const Node& node, const FeatureMatrix& matrix, std::size_t row) {
    switch (node.type) {
        case Node::Type::Feature:
            return matrix.columns[node.feature][row];
        case Node::Type::Constant:
            return node.value;
        case Node::Type::Op: {
            const double a = eval_instance(*node.left, matrix, row);
            const double b = eval_instance(*node.right, matrix, row);
            switch (node.op) {
                case OpKind::Add: return a + b;
                case OpKind::Sub: return a - b;
                case OpKind::Mul: return a * b;
                case OpKind::Div: return std::fabs(b) < kDivEpsilon ? 1.0 : a / b;
                case OpKind::Max: return std::max(a, b);
                case OpKind::Min: return std::min(a, b);
            }
        }
    }
    return 0.0;
}

inline std::vector<double> eval_naive(const ExprTree& tree, const FeatureMatrix& matrix) {
    std::vector<double> out(matrix.n);
    for (std::size_t i = 0; i < matrix.n; ++i) out[i] = eval_instance(*tree.root, matrix, i);
    return out;
}

/// Textbook two-pass Pearson, including the constant-vector convention.
inline double pearson_naive(const std::vector<double>& x, const std::vector<double>& f) {
    const std::size_t n = x.size();
    double mx = 0.0, mf = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        mf += f[i];
    }
    mx /= n;
    mf /= n;
    double num = 0.0, sx = 0.0, sf = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (x[i] - mx) * (f[i] - mf);
        sx += (x[i] - mx) * (x[i] - mx);
        sf += (f[i] - mf) * (f[i] - mf);
    }
    if (sx <= 0.0 || sf <= 0.0) return 0.0;
    return num / (std::sqrt(sx) * std::sqrt(sf));
}

inline FeatureMatrix random_matrix(std::size_t n, std::size_t m, Rng& rng) {
    FeatureMatrix matrix;
    matrix.n = n;
    matrix.m = m;
    std::uniform_real_distribution<double> uniform(-5.0, 5.0);
    for (std::size_t j = 0; j < m; ++j) {
        matrix.names.push_back("f" + std::to_string(j));
        std::vector<double> col(n);
        for (auto& v : col) v = uniform(rng);
        matrix.columns.push_back(std::move(col));
    }
    return matrix;
}

inline ExprTree random_tree(int max_depth, int feature_count, Rng& rng) {
    return grow_tree(std::uniform_int_distribution<int>(1, max_depth)(rng), feature_count,
                     0.8, rng);
}

/// Test-only parser for the ASCII infix rendering: fully parenthesised
/// binary ops, max/min as two-argument functions, feature names, literals.
class InfixParser {
public:
    InfixParser(const std::string& text, const std::vector<std::string>& names)
        : text_(text) {
        for (std::size_t i = 0; i < names.size(); ++i) index_[names[i]] = static_cast<int>(i);
    }

    ExprTree parse() {
        auto root = expr();
        skip_ws();
        if (pos_ != text_.size()) throw std::runtime_error("infix: trailing input");
        return ExprTree(std::move(root));
    }

private:
    std::unique_ptr<Node> expr() {
        skip_ws();
        if (peek() == '(') {
            expect('(');
            auto left = expr();
            skip_ws();
            const char op = text_[pos_++];
            auto right = expr();
            expect(')');
            OpKind kind;
            switch (op) {
                case '+': kind = OpKind::Add; break;
                case '-': kind = OpKind::Sub; break;
                case '*': kind = OpKind::Mul; break;
                case '/': kind = OpKind::Div; break;
                default: throw std::runtime_error(std::string("infix: bad op ") + op);
            }
            return Node::make_op(kind, std::move(left), std::move(right));
        }
        const std::string tok = token();
        if (tok == "max" || tok == "min") {
            expect('(');
            auto left = expr();
            skip_ws();
            expect(',');
            auto right = expr();
            expect(')');
            return Node::make_op(tok == "max" ? OpKind::Max : OpKind::Min, std::move(left),
                                 std::move(right));
        }
        if (auto it = index_.find(tok); it != index_.end())
            return Node::make_feature(it->second);
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0')
            throw std::runtime_error("infix: bad terminal " + tok);
        return Node::make_constant(v);
    }

    char peek() {
        skip_ws();
        if (pos_ >= text_.size()) throw std::runtime_error("infix: truncated");
        return text_[pos_];
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != c)
            throw std::runtime_error(std::string("infix: expected ") + c);
        ++pos_;
    }

    std::string token() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' &&
               text_[pos_] != ',' && !std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (start == pos_) throw std::runtime_error("infix: empty token");
        return text_.substr(start, pos_ - start);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    std::unordered_map<std::string, int> index_;
};

}  // namespace gpfrm::testing
