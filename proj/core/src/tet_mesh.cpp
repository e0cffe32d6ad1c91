#include "tetimp/tet_mesh.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

namespace tetimp {

namespace {

std::array<int, 3> sorted_face(int u, int v, int w) {
  std::array<int, 3> f = {u, v, w};
  std::sort(f.begin(), f.end());
  return f;
}

std::array<int, 3> face_of(const std::array<int, 4>& cell, int lf) {
  return sorted_face(cell[kFaceCorners[lf][0]], cell[kFaceCorners[lf][1]],
                     cell[kFaceCorners[lf][2]]);
}

} // namespace

double TetMesh::cell_volume(const Vec3& a, const Vec3& b, const Vec3& c,
                            const Vec3& d) {
  return (b - a).cross(c - a).dot(d - a) / 6.0;
}

TetMesh TetMesh::build(std::vector<Vec3> points,
                       const std::vector<std::array<int, 4>>& cells) {
  TetMesh m;
  m.points_ = std::move(points);
  const int nv = m.vertex_count();
  if (cells.empty()) throw EmptyMesh("mesh has no cells");

  double floor;
  {
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::max());
    Vec3 hi = Vec3::Constant(std::numeric_limits<double>::lowest());
    for (const Vec3& p : m.points_) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    double diag = (hi - lo).norm();
    floor = kVolumeFloorScale * diag * diag * diag;
  }

  m.cells_.reserve(cells.size());
  std::set<std::array<int, 4>> seen;
  for (size_t k = 0; k < cells.size(); ++k) {
    std::array<int, 4> c = cells[k];
    for (int v : c) {
      if (v < 0 || v >= nv)
        throw IndexOutOfRange("cell " + std::to_string(k) +
                              " references vertex " + std::to_string(v));
    }
    std::array<int, 4> key = c;
    std::sort(key.begin(), key.end());
    if (key[0] == key[1] || key[1] == key[2] || key[2] == key[3])
      throw DegenerateCell("cell " + std::to_string(k) +
                           " repeats a vertex");
    if (!seen.insert(key).second)
      throw InvalidInput("duplicate cell " + std::to_string(k));
    double vol = cell_volume(m.points_[c[0]], m.points_[c[1]],
                             m.points_[c[2]], m.points_[c[3]]);
    if (vol < 0) {
      std::swap(c[0], c[1]);
      vol = -vol;
    }
    if (vol <= floor)
      throw DegenerateCell("cell " + std::to_string(k) +
                           " has near-zero volume");
    m.cells_.push_back(c);
  }
  m.live_count_ = static_cast<int>(m.cells_.size());

  m.nbrs_.assign(m.cells_.size(), {-1, -1, -1, -1});
  std::map<std::array<int, 3>, std::pair<int, int>> half;
  for (int t = 0; t < static_cast<int>(m.cells_.size()); ++t) {
    for (int lf = 0; lf < 4; ++lf) {
      auto key = face_of(m.cells_[t], lf);
      auto it = half.find(key);
      if (it == half.end()) {
        half.emplace(key, std::make_pair(t, lf));
      } else if (it->second.first < 0) {
        throw InvalidInput("face shared by more than two cells");
      } else {
        m.nbrs_[t][lf] = it->second.first;
        m.nbrs_[it->second.first][it->second.second] = t;
        it->second.first = -1;
      }
    }
  }

  m.vertex_tets_.assign(nv, {});
  for (int t = 0; t < static_cast<int>(m.cells_.size()); ++t)
    for (int v : m.cells_[t]) m.vertex_tets_[v].push_back(t);

  m.geom_version_ = 1;
  return m;
}

int TetMesh::add_vertex(const Vec3& p) {
  points_.push_back(p);
  vertex_tets_.emplace_back();
  geom_version_++;
  return static_cast<int>(points_.size()) - 1;
}

std::vector<int> TetMesh::live_tets() const {
  std::vector<int> out;
  out.reserve(live_count_);
  for (int t = 0; t < static_cast<int>(cells_.size()); ++t)
    if (alive(t)) out.push_back(t);
  return out;
}

std::array<Vec3, 4> TetMesh::tet_points(int t) const {
  const auto& c = cells_[t];
  return {points_[c[0]], points_[c[1]], points_[c[2]], points_[c[3]]};
}

double TetMesh::tet_volume(int t) const {
  const auto& c = cells_[t];
  return cell_volume(points_[c[0]], points_[c[1]], points_[c[2]],
                     points_[c[3]]);
}

double TetMesh::total_volume() const {
  double s = 0;
  for (int t = 0; t < static_cast<int>(cells_.size()); ++t)
    if (alive(t)) s += tet_volume(t);
  return s;
}

double TetMesh::bbox_diag() const {
  if (cached_diag_version_ == geom_version_ && cached_diag_ >= 0)
    return cached_diag_;
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::max());
  Vec3 hi = Vec3::Constant(std::numeric_limits<double>::lowest());
  bool any = false;
  for (int v = 0; v < vertex_count(); ++v) {
    if (!vertex_referenced(v)) continue;
    lo = lo.cwiseMin(points_[v]);
    hi = hi.cwiseMax(points_[v]);
    any = true;
  }
  cached_diag_ = any ? (hi - lo).norm() : 0.0;
  cached_diag_version_ = geom_version_;
  return cached_diag_;
}

bool TetMesh::is_boundary_vertex(int v) const {
  for (int t : vertex_tets_[v]) {
    const auto& c = cells_[t];
    for (int lf = 0; lf < 4; ++lf) {
      if (nbrs_[t][lf] != -1) continue;
      for (int j : kFaceCorners[lf])
        if (c[j] == v) return true;
    }
  }
  return false;
}

bool TetMesh::is_edge(int a, int b) const {
  const auto& ta = vertex_tets_[a];
  const auto& tb = vertex_tets_[b];
  const auto& small = ta.size() <= tb.size() ? ta : tb;
  int other = ta.size() <= tb.size() ? b : a;
  for (int t : small) {
    const auto& c = cells_[t];
    if (std::find(c.begin(), c.end(), other) != c.end()) return true;
  }
  return false;
}

EdgeStar TetMesh::edge_star(int a, int b) const {
  if (a < 0 || b < 0 || a >= vertex_count() || b >= vertex_count())
    throw IndexOutOfRange("edge_star vertex out of range");
  int t0 = -1;
  for (int t : vertex_tets_[a]) {
    const auto& c = cells_[t];
    if (std::find(c.begin(), c.end(), b) != c.end()) {
      t0 = t;
      break;
    }
  }
  if (t0 < 0) throw NotAnEdge("vertices " + std::to_string(a) + "," +
                              std::to_string(b) + " share no tet");

  // In tet t the faces containing edge (a,b) are the two faces opposite the
  // remaining vertices; crossing one of them advances around the edge.
  auto other_two = [&](int t) {
    std::array<int, 2> o{};
    int k = 0;
    for (int v : cells_[t])
      if (v != a && v != b) o[k++] = v;
    return o;
  };
  auto local_of = [&](int t, int v) {
    const auto& c = cells_[t];
    for (int i = 0; i < 4; ++i)
      if (c[i] == v) return i;
    return -1;
  };
  // Walks from t0 crossing first the face opposite `from`, collecting apexes
  // until hitting the boundary or closing the cycle. Returns (tets, apexes)
  // where apexes has one more entry than tets.
  auto walk = [&](int start, int from) {
    std::vector<int> tets, apx;
    int t = start;
    int prev = from;  // apex behind us
    auto o = other_two(t);
    int ahead = (o[0] == prev) ? o[1] : o[0];
    apx.push_back(prev);
    while (true) {
      tets.push_back(t);
      apx.push_back(ahead);
      int next = nbrs_[t][local_of(t, prev)];
      if (next == -1 || next == start) {
        return std::make_tuple(tets, apx, next == start);
      }
      auto no = other_two(next);
      int fresh = (no[0] == ahead) ? no[1] : no[0];
      prev = ahead;
      ahead = fresh;
      t = next;
    }
  };

  auto o0 = other_two(t0);
  auto [tets, apx, closed] = walk(t0, o0[0]);
  EdgeStar star;
  if (closed) {
    star.tets = std::move(tets);
    apx.pop_back();  // cycle: last apex repeats the first
    star.apex = std::move(apx);
    star.boundary = false;
  } else {
    // Open fan: walk the other way from t0 and splice.
    auto [tets2, apx2, closed2] = walk(t0, o0[1]);
    (void)closed2;
    std::reverse(tets2.begin(), tets2.end());
    std::reverse(apx2.begin(), apx2.end());
    tets2.pop_back();  // t0 counted twice
    apx2.pop_back();
    apx2.pop_back();
    tets2.insert(tets2.end(), tets.begin(), tets.end());
    apx2.insert(apx2.end(), apx.begin(), apx.end());
    star.tets = std::move(tets2);
    star.apex = std::move(apx2);
    star.boundary = true;
  }
  return star;
}

std::vector<int> TetMesh::tets_with_face(int u, int v, int w) const {
  std::vector<int> out;
  for (int t : vertex_tets_[u]) {
    const auto& c = cells_[t];
    if (std::find(c.begin(), c.end(), v) != c.end() &&
        std::find(c.begin(), c.end(), w) != c.end())
      out.push_back(t);
  }
  return out;
}

std::vector<std::pair<int, int>> TetMesh::boundary_faces() const {
  std::vector<std::pair<int, int>> out;
  for (int t = 0; t < static_cast<int>(cells_.size()); ++t) {
    if (!alive(t)) continue;
    for (int lf = 0; lf < 4; ++lf)
      if (nbrs_[t][lf] == -1) out.emplace_back(t, lf);
  }
  return out;
}

int TetMesh::claim_slot(const std::array<int, 4>& cell) {
  int t;
  if (!free_slots_.empty()) {
    t = free_slots_.back();
    free_slots_.pop_back();
    cells_[t] = cell;
    nbrs_[t] = {-1, -1, -1, -1};
  } else {
    t = static_cast<int>(cells_.size());
    cells_.push_back(cell);
    nbrs_.push_back({-1, -1, -1, -1});
  }
  for (int v : cell) vertex_tets_[v].push_back(t);
  live_count_++;
  return t;
}

void TetMesh::release_slot(int t) {
  for (int v : cells_[t]) {
    auto& lst = vertex_tets_[v];
    lst.erase(std::find(lst.begin(), lst.end(), t));
  }
  cells_[t][0] = -1;
  nbrs_[t] = {-1, -1, -1, -1};
  free_slots_.push_back(t);
  live_count_--;
}

std::vector<int> TetMesh::replace_tets(
    std::span<const int> old_ids,
    std::span<const std::array<int, 4>> new_cells, bool reshape_boundary) {
  // Outer faces of the region keyed by sorted triple -> (outside tet, its
  // local face); -1 for boundary faces.
  std::set<int> old_set(old_ids.begin(), old_ids.end());
  std::map<std::array<int, 3>, std::pair<int, int>> outer;
  for (int t : old_ids) {
    if (!alive(t)) throw IndexOutOfRange("replace_tets: dead tet");
    for (int lf = 0; lf < 4; ++lf) {
      int nb = nbrs_[t][lf];
      if (nb != -1 && old_set.count(nb)) continue;
      auto key = face_of(cells_[t], lf);
      int nb_lf = -1;
      if (nb != -1) {
        for (int g = 0; g < 4; ++g)
          if (nbrs_[nb][g] == t) nb_lf = g;
      }
      if (!outer.emplace(key, std::make_pair(nb, nb_lf)).second)
        throw CorruptRecord("replace_tets: duplicated region face");
    }
  }

  for (int t : old_ids) release_slot(t);

  std::vector<int> fresh;
  fresh.reserve(new_cells.size());
  for (const auto& c : new_cells) fresh.push_back(claim_slot(c));

  // Pair faces among the new cells and stitch the rest to the outer map.
  std::map<std::array<int, 3>, std::pair<int, int>> open;
  for (int t : fresh) {
    for (int lf = 0; lf < 4; ++lf) {
      auto key = face_of(cells_[t], lf);
      auto it = open.find(key);
      if (it != open.end()) {
        nbrs_[t][lf] = it->second.first;
        nbrs_[it->second.first][it->second.second] = t;
        open.erase(it);
      } else {
        open.emplace(key, std::make_pair(t, lf));
      }
    }
  }
  for (auto& [key, tf] : open) {
    auto it = outer.find(key);
    if (it == outer.end()) {
      if (!reshape_boundary)
        throw CorruptRecord("replace_tets: new cells do not tile the region");
      nbrs_[tf.first][tf.second] = -1;  // face newly on the mesh boundary
      continue;
    }
    auto [nb, nb_lf] = it->second;
    nbrs_[tf.first][tf.second] = nb;
    if (nb != -1) nbrs_[nb][nb_lf] = tf.first;
    outer.erase(it);
  }
  for (const auto& [key, tf] : outer)
    if (tf.first != -1 || !reshape_boundary)
      throw CorruptRecord("replace_tets: region boundary not covered");
  geom_version_++;
  return fresh;
}

void TetMesh::compact() {
  std::vector<int> vmap(points_.size(), -1);
  std::vector<Vec3> pts;
  for (int v = 0; v < vertex_count(); ++v) {
    if (vertex_referenced(v)) {
      vmap[v] = static_cast<int>(pts.size());
      pts.push_back(points_[v]);
    }
  }
  std::vector<std::array<int, 4>> cells;
  cells.reserve(live_count_);
  for (int t = 0; t < static_cast<int>(cells_.size()); ++t) {
    if (!alive(t)) continue;
    std::array<int, 4> c = cells_[t];
    for (int& v : c) v = vmap[v];
    cells.push_back(c);
  }
  *this = build(std::move(pts), cells);
}

void TetMesh::validate() const {
  if (live_count_ == 0) throw EmptyMesh("mesh has no live cells");
  double floor = volume_floor();
  std::map<std::array<int, 3>, int> face_count;
  for (int t = 0; t < static_cast<int>(cells_.size()); ++t) {
    if (!alive(t)) continue;
    const auto& c = cells_[t];
    for (int v : c)
      if (v < 0 || v >= vertex_count())
        throw IndexOutOfRange("cell vertex out of range");
    if (tet_volume(t) <= floor)
      throw DegenerateCell("cell " + std::to_string(t) +
                           " has non-positive volume");
    for (int lf = 0; lf < 4; ++lf) {
      face_count[face_of(c, lf)]++;
      int nb = nbrs_[t][lf];
      if (nb == -1) continue;
      if (nb < 0 || nb >= tet_slot_count() || !alive(nb))
        throw InvalidInput("neighbor link to dead tet");
      bool back = false;
      for (int g = 0; g < 4; ++g)
        if (nbrs_[nb][g] == t && face_of(cells_[nb], g) == face_of(c, lf))
          back = true;
      if (!back) throw InvalidInput("neighbor links not mutual");
    }
    for (int v : c) {
      const auto& lst = vertex_tets_[v];
      if (std::find(lst.begin(), lst.end(), t) == lst.end())
        throw InvalidInput("vertex incidence list out of sync");
    }
  }
  for (const auto& [f, n] : face_count)
    if (n > 2) throw InvalidInput("face shared by more than two cells");
}

std::vector<std::array<int, 4>> TetMesh::canonical_cells() const {
  std::vector<std::array<int, 4>> out;
  out.reserve(live_count_);
  for (int t = 0; t < static_cast<int>(cells_.size()); ++t) {
    if (!alive(t)) continue;
    std::array<int, 4> c = cells_[t];
    std::sort(c.begin(), c.end());
    out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t TetMesh::canonical_hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t x) {
    h ^= x;
    h *= 1099511628211ull;
  };
  for (const auto& c : canonical_cells())
    for (int v : c) mix(static_cast<std::uint64_t>(v) + 0x9e3779b9ull);
  return h;
}

} // namespace tetimp
