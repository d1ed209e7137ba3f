#include "gpfrm/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace gpfrm {

std::unique_ptr<Node> Node::make_feature(int index) {
    auto node = std::make_unique<Node>();
    node->type = Type::Feature;
    node->feature = index;
    return node;
}

std::unique_ptr<Node> Node::make_constant(double value) {
    auto node = std::make_unique<Node>();
    node->type = Type::Constant;
    node->value = value;
    return node;
}

std::unique_ptr<Node> Node::make_op(OpKind kind, std::unique_ptr<Node> l,
                                    std::unique_ptr<Node> r) {
    auto node = std::make_unique<Node>();
    node->type = Type::Op;
    node->op = kind;
    node->left = std::move(l);
    node->right = std::move(r);
    return node;
}

std::unique_ptr<Node> Node::clone() const {
    auto node = std::make_unique<Node>();
    node->type = type;
    node->feature = feature;
    node->value = value;
    node->op = op;
    if (left) node->left = left->clone();
    if (right) node->right = right->clone();
    return node;
}

namespace {

int node_size(const Node& n) {
    if (n.type != Node::Type::Op) return 1;
    return 1 + node_size(*n.left) + node_size(*n.right);
}

int node_depth(const Node& n) {
    if (n.type != Node::Type::Op) return 1;
    return 1 + std::max(node_depth(*n.left), node_depth(*n.right));
}

void collect_features(const Node& n, std::vector<int>& out) {
    if (n.type == Node::Type::Feature) {
        out.push_back(n.feature);
    } else if (n.type == Node::Type::Op) {
        collect_features(*n.left, out);
        collect_features(*n.right, out);
    }
}

}  // namespace

int size(const ExprTree& tree) { return tree.root ? node_size(*tree.root) : 0; }

int depth(const ExprTree& tree) { return tree.root ? node_depth(*tree.root) : 0; }

std::vector<int> features_used(const ExprTree& tree) {
    std::vector<int> out;
    if (tree.root) collect_features(*tree.root, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

TreeEvaluator::TreeEvaluator(const FeatureMatrix& matrix) : matrix_(&matrix) {}

std::vector<double>& TreeEvaluator::scratch(int level) {
    if (static_cast<std::size_t>(level) >= buffers_.size())
        buffers_.resize(level + 1);
    return buffers_[level];
}

void TreeEvaluator::eval_node(const Node& node, std::vector<double>& out, int level) {
    const std::size_t n = matrix_->n;
    out.resize(n);
    switch (node.type) {
        case Node::Type::Feature: {
            const auto& col = matrix_->columns[node.feature];
            std::copy(col.begin(), col.end(), out.begin());
            return;
        }
        case Node::Type::Constant:
            std::fill(out.begin(), out.end(), node.value);
            return;
        case Node::Type::Op: {
            eval_node(*node.left, out, level + 1);
            auto& rhs = scratch(level);
            eval_node(*node.right, rhs, level + 1);
            switch (node.op) {
                case OpKind::Add:
                    for (std::size_t i = 0; i < n; ++i) out[i] += rhs[i];
                    break;
                case OpKind::Sub:
                    for (std::size_t i = 0; i < n; ++i) out[i] -= rhs[i];
                    break;
                case OpKind::Mul:
                    for (std::size_t i = 0; i < n; ++i) out[i] *= rhs[i];
                    break;
                case OpKind::Div:
                    for (std::size_t i = 0; i < n; ++i)
                        out[i] = std::fabs(rhs[i]) < kDivEpsilon ? 1.0 : out[i] / rhs[i];
                    break;
                case OpKind::Max:
                    for (std::size_t i = 0; i < n; ++i) out[i] = std::max(out[i], rhs[i]);
                    break;
                case OpKind::Min:
                    for (std::size_t i = 0; i < n; ++i) out[i] = std::min(out[i], rhs[i]);
                    break;
            }
            return;
        }
    }
}

Output TreeEvaluator::evaluate(const ExprTree& tree) {
    Output result;
    if (!tree.root) throw std::invalid_argument("evaluate: empty tree");
    // Pre-size the pool: eval_node holds references into buffers_, so it must
    // not reallocate mid-recursion.
    const auto levels = static_cast<std::size_t>(node_depth(*tree.root));
    if (buffers_.size() < levels) buffers_.resize(levels);
    eval_node(*tree.root, result.values, 0);
    result.finite = std::all_of(result.values.begin(), result.values.end(),
                                [](double v) { return std::isfinite(v); });
    return result;
}

Output evaluate(const ExprTree& tree, const FeatureMatrix& matrix) {
    TreeEvaluator evaluator(matrix);
    return evaluator.evaluate(tree);
}

namespace {

std::string format_constant(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

const char* op_symbol(OpKind op, bool ascii) {
    switch (op) {
        case OpKind::Add: return "+";
        case OpKind::Sub: return "-";
        case OpKind::Mul: return ascii ? "*" : "×";
        case OpKind::Div: return ascii ? "/" : "÷";
        case OpKind::Max: return "max";
        case OpKind::Min: return "min";
    }
    return "?";
}

const std::string& feature_name(const std::vector<std::string>& names, int index) {
    if (index < 0 || static_cast<std::size_t>(index) >= names.size())
        throw std::out_of_range("render: no name for feature " + std::to_string(index));
    return names[index];
}

void render_infix(const Node& n, const std::vector<std::string>& names, bool ascii,
                  std::string& out) {
    switch (n.type) {
        case Node::Type::Feature:
            out += feature_name(names, n.feature);
            return;
        case Node::Type::Constant:
            out += format_constant(n.value);
            return;
        case Node::Type::Op:
            if (n.op == OpKind::Max || n.op == OpKind::Min) {
                out += op_symbol(n.op, ascii);
                out += '(';
                render_infix(*n.left, names, ascii, out);
                out += ", ";
                render_infix(*n.right, names, ascii, out);
                out += ')';
            } else {
                out += '(';
                render_infix(*n.left, names, ascii, out);
                out += ' ';
                out += op_symbol(n.op, ascii);
                out += ' ';
                render_infix(*n.right, names, ascii, out);
                out += ')';
            }
            return;
    }
}

void render_sexpr(const Node& n, const std::vector<std::string>& names, std::string& out) {
    switch (n.type) {
        case Node::Type::Feature:
            out += feature_name(names, n.feature);
            return;
        case Node::Type::Constant:
            out += format_constant(n.value);
            return;
        case Node::Type::Op:
            out += '(';
            out += op_symbol(n.op, true);
            out += ' ';
            render_sexpr(*n.left, names, out);
            out += ' ';
            render_sexpr(*n.right, names, out);
            out += ')';
            return;
    }
}

int render_dot(const Node& n, const std::vector<std::string>& names, int& counter,
               std::ostringstream& out) {
    const int id = counter++;
    std::string label;
    switch (n.type) {
        case Node::Type::Feature: label = feature_name(names, n.feature); break;
        case Node::Type::Constant: label = format_constant(n.value); break;
        case Node::Type::Op: label = op_symbol(n.op, true); break;
    }
    out << "  n" << id << " [label=\"" << label << "\"];\n";
    if (n.type == Node::Type::Op) {
        const int l = render_dot(*n.left, names, counter, out);
        out << "  n" << id << " -> n" << l << ";\n";
        const int r = render_dot(*n.right, names, counter, out);
        out << "  n" << id << " -> n" << r << ";\n";
    }
    return id;
}

}  // namespace

std::string render(const ExprTree& tree, const std::vector<std::string>& names,
                   RenderFormat format, bool ascii_ops) {
    if (!tree.root) throw std::invalid_argument("render: empty tree");
    std::string out;
    switch (format) {
        case RenderFormat::Infix:
            render_infix(*tree.root, names, ascii_ops, out);
            return out;
        case RenderFormat::Sexpr:
            render_sexpr(*tree.root, names, out);
            return out;
        case RenderFormat::Dot: {
            std::ostringstream dot;
            dot << "digraph expr {\n";
            int counter = 0;
            render_dot(*tree.root, names, counter, dot);
            dot << "}\n";
            return dot.str();
        }
    }
    return out;
}

namespace {

struct SexprParser {
    const std::string& text;
    std::size_t pos = 0;
    const std::unordered_map<std::string, int>& name_index;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    std::string token() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
               text[pos] != '(' && text[pos] != ')')
            ++pos;
        if (start == pos) throw std::invalid_argument("parse_sexpr: unexpected character");
        return text.substr(start, pos - start);
    }

    std::unique_ptr<Node> parse() {
        skip_ws();
        if (pos >= text.size()) throw std::invalid_argument("parse_sexpr: truncated input");
        if (text[pos] == '(') {
            ++pos;
            const std::string op = token();
            OpKind kind;
            if (op == "+") kind = OpKind::Add;
            else if (op == "-") kind = OpKind::Sub;
            else if (op == "*") kind = OpKind::Mul;
            else if (op == "/") kind = OpKind::Div;
            else if (op == "max") kind = OpKind::Max;
            else if (op == "min") kind = OpKind::Min;
            else throw std::invalid_argument("parse_sexpr: unknown operator " + op);
            auto left = parse();
            auto right = parse();
            skip_ws();
            if (pos >= text.size() || text[pos] != ')')
                throw std::invalid_argument("parse_sexpr: expected ')'");
            ++pos;
            return Node::make_op(kind, std::move(left), std::move(right));
        }
        const std::string tok = token();
        if (auto it = name_index.find(tok); it != name_index.end())
            return Node::make_feature(it->second);
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0')
            throw std::invalid_argument("parse_sexpr: unknown terminal " + tok);
        return Node::make_constant(v);
    }
};

}  // namespace

ExprTree parse_sexpr(const std::string& text, const std::vector<std::string>& names) {
    std::unordered_map<std::string, int> name_index;
    for (std::size_t i = 0; i < names.size(); ++i) name_index.emplace(names[i], static_cast<int>(i));
    SexprParser parser{text, 0, name_index};
    ExprTree tree(parser.parse());
    parser.skip_ws();
    if (parser.pos != text.size())
        throw std::invalid_argument("parse_sexpr: trailing input");
    return tree;
}

}  // namespace gpfrm
