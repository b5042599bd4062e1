#include "opinionlab/net.hpp"

#include <algorithm>
#include <numeric>

namespace opinionlab {

namespace {

void check_square(const Matrix& A, const char* who) {
  if (A.rows() < 2 || A.rows() != A.cols()) {
    throw InvalidSize(std::string(who) + ": need a square matrix with n >= 2");
  }
}

// Support digraph as adjacency lists.
std::vector<std::vector<int>> support(const Matrix& A) {
  const int n = static_cast<int>(A.rows());
  std::vector<std::vector<int>> out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (A(i, j) > 0.0) out[i].push_back(j);
  return out;
}

void dfs(const std::vector<std::vector<int>>& g, int s, std::vector<char>& seen) {
  std::vector<int> stack{s};
  seen[s] = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : g[u])
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
  }
}

bool strongly_connected(const Matrix& A) {
  const int n = static_cast<int>(A.rows());
  auto g = support(A);
  std::vector<std::vector<int>> gr(n);
  for (int i = 0; i < n; ++i)
    for (int j : g[i]) gr[j].push_back(i);
  std::vector<char> seen(n, 0);
  dfs(g, 0, seen);
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) return false;
  std::fill(seen.begin(), seen.end(), 0);
  dfs(gr, 0, seen);
  return std::find(seen.begin(), seen.end(), 0) == seen.end();
}

// Period of a strongly connected digraph: gcd over all edges (u,v) of
// depth(u) + 1 - depth(v) from a BFS tree.
int graph_period(const Matrix& A) {
  const int n = static_cast<int>(A.rows());
  auto g = support(A);
  std::vector<int> depth(n, -1);
  std::vector<int> queue{0};
  depth[0] = 0;
  for (std::size_t q = 0; q < queue.size(); ++q) {
    int u = queue[q];
    for (int v : g[u])
      if (depth[v] < 0) {
        depth[v] = depth[u] + 1;
        queue.push_back(v);
      }
  }
  int period = 0;
  for (int u = 0; u < n; ++u)
    for (int v : g[u]) period = std::gcd(period, std::abs(depth[u] + 1 - depth[v]));
  return period == 0 ? 1 : period;
}

}  // namespace

Network make_network(Matrix A, std::vector<std::string> labels) {
  check_square(A, "make_network()");
  const int n = static_cast<int>(A.rows());
  for (int i = 0; i < n; ++i) {
    if (A(i, i) != 0.0) throw InvalidSize("make_network(): diagonal must be zero");
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      if (A(i, j) < 0.0) throw InvalidSize("make_network(): negative weight");
      row += A(i, j);
    }
    if (std::abs(row - 1.0) > kRowSumTol)
      throw InvalidSize("make_network(): row " + std::to_string(i) + " sums to " +
                        std::to_string(row));
  }
  if (!labels.empty() && static_cast<int>(labels.size()) != n)
    throw InvalidSize("make_network(): label count mismatch");
  Network net;
  net.n = n;
  net.A = std::move(A);
  net.labels = std::move(labels);
  return net;
}

namespace {
// Fills a row with weight 1/k on the given columns, compensating the last
// entry so the row sums to 1.0 exactly in floating point.
void fill_uniform_row(Matrix& A, int i, const std::vector<int>& cols) {
  const double w = 1.0 / static_cast<double>(cols.size());
  double acc = 0.0;
  for (std::size_t c = 0; c + 1 < cols.size(); ++c) {
    A(i, cols[c]) = w;
    acc += w;
  }
  A(i, cols.back()) = 1.0 - acc;
}
}  // namespace

Network make_complete(int n) {
  if (n < 2) throw InvalidSize("make_complete(): n >= 2 required");
  Matrix A = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    std::vector<int> cols;
    for (int j = 0; j < n; ++j)
      if (j != i) cols.push_back(j);
    fill_uniform_row(A, i, cols);
  }
  Network net = make_network(std::move(A));
  net.generator_ = "complete";
  return net;
}

Network make_directed_circle(int n) {
  if (n < 2) throw InvalidSize("make_directed_circle(): n >= 2 required");
  Matrix A = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) A(i, (i + 1) % n) = 1.0;  // i listens to i+1
  Network net = make_network(std::move(A));
  net.generator_ = "directed_circle";
  return net;
}

Network make_star(int n) {
  if (n < 3) throw InvalidSize("make_star(): n >= 3 required");
  Matrix A = Matrix::Zero(n, n);
  std::vector<int> spokes(n - 1);
  std::iota(spokes.begin(), spokes.end(), 1);
  fill_uniform_row(A, 0, spokes);
  for (int i = 1; i < n; ++i) A(i, 0) = 1.0;
  Network net = make_network(std::move(A));
  net.generator_ = "star";
  return net;
}

Network make_two_stars(int n_per_star) {
  if (n_per_star < 3) throw InvalidSize("make_two_stars(): n_per_star >= 3 required");
  const Network star = make_star(n_per_star);
  const int n = 2 * n_per_star;
  Matrix A = Matrix::Zero(n, n);
  A.topLeftCorner(n_per_star, n_per_star) = star.A;
  A.bottomRightCorner(n_per_star, n_per_star) = star.A;
  Network net = make_network(std::move(A));
  net.generator_ = "two_stars";
  return net;
}

Network make_named_network(const std::string& name, int n) {
  if (name == "complete") return make_complete(n);
  if (name == "directed_circle") return make_directed_circle(n);
  if (name == "star") return make_star(n);
  if (name == "two_stars") return make_two_stars(n);
  throw ConfigError("make_named_network(): unknown generator '" + name + "'");
}

Connectivity connectivity(const Network& net) {
  Connectivity c;
  c.strongly_connected = strongly_connected(net.A);
  c.aperiodic = c.strongly_connected && graph_period(net.A) == 1;
  return c;
}

bool is_connected(const Network& net) { return connectivity(net).primitive(); }

Vector stationary_weights(const Network& net) {
  if (!strongly_connected(net.A))
    throw NotStronglyConnected("stationary_weights(): support digraph is not strongly connected");
  const int n = net.n;
  // (A^T - I) rho = 0 with the last equation replaced by the normalization.
  Matrix M = net.A.transpose() - Matrix::Identity(n, n);
  M.row(n - 1).setOnes();
  Vector rhs = Vector::Zero(n);
  rhs(n - 1) = 1.0;
  Vector rho = M.colPivHouseholderQr().solve(rhs);
  const double resid = (net.A.transpose() * rho - rho).cwiseAbs().maxCoeff();
  if (resid > kRowSumTol || rho.minCoeff() <= 0.0)
    throw NotStronglyConnected("stationary_weights(): no unique positive stationary vector");
  return rho;
}

}  // namespace opinionlab
