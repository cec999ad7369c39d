#pragma once

#include "invforge/scalar.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace invforge {

// ---------------------------------------------------------------------------
// k-SAT
// ---------------------------------------------------------------------------

struct Literal {
  int var;  // 1-based
  bool positive;

  friend bool operator==(const Literal&, const Literal&) = default;
};

using Clause = std::vector<Literal>;

/// A k-CNF formula; every clause has exactly k distinct variables.
class CnfFormula {
 public:
  CnfFormula(int num_vars, int width, std::vector<Clause> clauses);

  int num_vars() const { return num_vars_; }
  int width() const { return width_; }
  int num_clauses() const { return static_cast<int>(clauses_.size()); }
  const std::vector<Clause>& clauses() const { return clauses_; }

  /// assignment[i] is the value of variable i+1.
  bool satisfied_by(const std::vector<bool>& assignment) const;

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;

 private:
  int num_vars_;
  int width_;
  std::vector<Clause> clauses_;
};

/// Standard DIMACS CNF. Clause widths must be uniform; k is the common width
/// (an empty clause list gives k = 1).
CnfFormula parse_dimacs(std::string_view text);
std::string emit_dimacs(const CnfFormula& f);

CnfFormula gen_random_ksat(int n, int m, int k, std::uint64_t seed);

// ---------------------------------------------------------------------------
// (0,1)-CVP_p
// ---------------------------------------------------------------------------

/// Basis B is d x n (columns are lattice vectors); radius r is stored as r,
/// not r^p. The gap is carried but no reduction uses it.
struct CvpInstance {
  RationalMatrix basis;
  RationalVector target;
  Rational radius;
  int p = 1;
  std::optional<Rational> gap;

  Index dim() const { return basis.rows(); }
  Index num_vectors() const { return basis.cols(); }

  /// Throws InputError unless dimensions agree, r >= 0, p >= 1, gap >= 0.
  void validate() const;

  bool operator==(const CvpInstance& o) const;
};

CvpInstance parse_cvp(std::string_view text);
std::string emit_cvp(const CvpInstance& c);

/// Entries are k/den with |value| <= entry_range and den in [1, max_den].
/// The radius is the distance of a random {0,1} combination, jittered up or
/// down, so both answers occur across seeds.
CvpInstance gen_random_cvp(int n, int d, int p, int entry_range, int max_den, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Graphs
// ---------------------------------------------------------------------------

struct Edge {
  int u;  // 0-based, u < v
  int v;
  Rational root_weight;  // rho_e; the edge weight is rho_e^p

  friend bool operator==(const Edge&, const Edge&) = default;
};

class WeightedGraph {
 public:
  /// Edges may be given in any orientation and order; stored sorted with u < v.
  WeightedGraph(int num_vertices, std::vector<Edge> edges);

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Root weight of edge {u, v}, or nullopt for a non-edge.
  const Rational* find(int u, int v) const;
  bool has_edge(int u, int v) const { return find(u, v) != nullptr; }

  friend bool operator==(const WeightedGraph&, const WeightedGraph&) = default;

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<int> index_;  // n*n, -1 for non-edges
};

struct HalfCliqueQuery {
  WeightedGraph graph;
  Rational bound;  // M: is there a half-clique of total weight < M?
};

struct VertexCoverQuery {
  WeightedGraph graph;
  int size;  // q
};

HalfCliqueQuery make_halfclique_query(WeightedGraph g, Rational bound);
VertexCoverQuery make_vertexcover_query(WeightedGraph g, int size);

/// "graph <n>" then one "i j num/den" line per edge (1-based). The weight may
/// be omitted, in which case it is 1.
WeightedGraph parse_graph(std::string_view text);
std::string emit_graph(const WeightedGraph& g);

/// Each pair i<j is an edge with probability edge_prob; root weights are
/// uniform integers in [min_root, max_root].
WeightedGraph gen_random_graph(int n, double edge_prob, int min_root, int max_root, std::uint64_t seed);

/// Sum of rho_e^p over all edges.
Rational total_weight(const WeightedGraph& g, int p);

}  // namespace invforge
