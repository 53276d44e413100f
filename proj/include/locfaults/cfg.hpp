#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "locfaults/ast.hpp"

namespace locfaults {

using NodeId = int;

struct CfgAssign {
  std::string target;
  NameExpr rhs;
  int line = 0;
};

// Nodes of the loop-free control-flow graph. A Condition's `left` child is
// the branch taken when the condition holds, `right` when it does not.
// Variables are not renamed here; versions are assigned lazily while a
// driver walks one path (each traversal carries its own version map).
struct CfgNode {
  enum class Kind { Precondition, Condition, AssignBlock, Guard, Postcondition };

  Kind kind = Kind::Precondition;
  int line = 0;
  NameBool expr;                   // Precondition / Condition / Guard / Postcondition
  NodeId left = -1;                // Condition: successor when true
  NodeId right = -1;               // Condition: successor when false
  NodeId next = -1;                // other kinds: unique successor
  std::vector<CfgAssign> assigns;  // AssignBlock only
};

struct Cfg {
  NodeId root = -1;
  NodeId sink = -1;
  std::vector<CfgNode> nodes;

  const CfgNode& node(NodeId id) const { return nodes[static_cast<size_t>(id)]; }
};

namespace detail {

class CfgBuilder {
 public:
  explicit CfgBuilder(const Program& p) : prog_(p) {}

  Cfg build() {
    Cfg cfg;
    CfgNode post;
    post.kind = CfgNode::Kind::Postcondition;
    post.line = prog_.post_line;
    post.expr = prog_.postcondition;
    cfg.sink = add(cfg, std::move(post));

    NodeId entry = build_seq(cfg, prog_.body, cfg.sink);

    CfgNode pre;
    pre.kind = CfgNode::Kind::Precondition;
    pre.line = prog_.pre_line;
    pre.expr = prog_.precondition;
    pre.next = entry;
    cfg.root = add(cfg, std::move(pre));
    return cfg;
  }

 private:
  NodeId add(Cfg& cfg, CfgNode node) {
    cfg.nodes.push_back(std::move(node));
    return static_cast<NodeId>(cfg.nodes.size() - 1);
  }

  // Builds the statement list back to front so that runs of consecutive
  // assignments fuse into one maximal AssignBlock.
  NodeId build_seq(Cfg& cfg, const std::vector<Stmt>& body, NodeId succ) {
    std::vector<CfgAssign> run;
    auto flush = [&]() {
      if (run.empty()) return;
      CfgNode block;
      block.kind = CfgNode::Kind::AssignBlock;
      block.line = run.front().line;
      block.assigns = std::move(run);
      block.next = succ;
      succ = add(cfg, std::move(block));
      run.clear();
    };
    for (auto it = body.rbegin(); it != body.rend(); ++it) {
      const Stmt& s = *it;
      switch (s.kind) {
        case Stmt::Kind::Assign:
          run.insert(run.begin(), CfgAssign{s.target, s.rhs, s.line});
          break;
        case Stmt::Kind::IfElse: {
          flush();
          CfgNode cond;
          cond.kind = CfgNode::Kind::Condition;
          cond.line = s.line;
          cond.expr = s.cond;
          cond.left = build_seq(cfg, s.then_body, succ);
          cond.right = build_seq(cfg, s.else_body, succ);
          succ = add(cfg, std::move(cond));
          break;
        }
        case Stmt::Kind::Guard: {
          flush();
          CfgNode g;
          g.kind = CfgNode::Kind::Guard;
          g.line = s.line;
          g.expr = s.cond;
          g.next = succ;
          succ = add(cfg, std::move(g));
          break;
        }
        case Stmt::Kind::While:
          throw std::invalid_argument("build_cfg requires a loop-free program (run unroll first)");
      }
    }
    flush();
    return succ;
  }

  const Program& prog_;
};

}  // namespace detail

inline Cfg build_cfg(const Program& p) { return detail::CfgBuilder(p).build(); }

// Number of root-to-sink paths.
inline long long paths_count(const Cfg& cfg) {
  std::vector<long long> memo(cfg.nodes.size(), -1);
  auto count = [&](auto&& self, NodeId id) -> long long {
    long long& m = memo[static_cast<size_t>(id)];
    if (m >= 0) return m;
    const CfgNode& n = cfg.node(id);
    switch (n.kind) {
      case CfgNode::Kind::Postcondition: return m = 1;
      case CfgNode::Kind::Condition: return m = self(self, n.left) + self(self, n.right);
      default: return m = self(self, n.next);
    }
  };
  return count(count, cfg.root);
}

// Graphviz rendering, for debugging.
inline std::string to_dot(const Cfg& cfg) {
  std::ostringstream os;
  os << "digraph cfg {\n  node [shape=box];\n";
  for (size_t i = 0; i < cfg.nodes.size(); ++i) {
    const CfgNode& n = cfg.nodes[i];
    os << "  n" << i << " [label=\"";
    switch (n.kind) {
      case CfgNode::Kind::Precondition: os << "pre: " << n.expr.str(); break;
      case CfgNode::Kind::Postcondition: os << "post: " << n.expr.str(); break;
      case CfgNode::Kind::Condition: os << "L" << n.line << ": " << n.expr.str(); break;
      case CfgNode::Kind::Guard: os << "L" << n.line << ": guard " << n.expr.str(); break;
      case CfgNode::Kind::AssignBlock:
        for (size_t j = 0; j < n.assigns.size(); ++j) {
          if (j) os << "\\n";
          os << "L" << n.assigns[j].line << ": " << n.assigns[j].target << " = "
             << n.assigns[j].rhs.str();
        }
        break;
    }
    os << "\"];\n";
    if (n.kind == CfgNode::Kind::Condition) {
      os << "  n" << i << " -> n" << n.left << " [label=\"T\"];\n";
      os << "  n" << i << " -> n" << n.right << " [label=\"F\"];\n";
    } else if (n.next >= 0) {
      os << "  n" << i << " -> n" << n.next << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace locfaults
