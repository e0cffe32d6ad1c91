#include "tetimp/flips.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "tetimp/errors.hpp"

namespace tetimp {

namespace {

// 6x the signed volume of (a, b, c, d).
double orient6(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return (b - a).cross(c - a).dot(d - a);
}

std::array<Vec3, 4> gather(const TetMesh& mesh, const std::array<int, 4>& c) {
  return {mesh.vertex(c[0]), mesh.vertex(c[1]), mesh.vertex(c[2]),
          mesh.vertex(c[3])};
}

// Orders (a, b, c, d) so the cell is positively oriented.
std::array<int, 4> positive_cell(const TetMesh& mesh, int a, int b, int c,
                                 int d) {
  std::array<int, 4> cell = {a, b, c, d};
  if (orient6(mesh.vertex(a), mesh.vertex(b), mesh.vertex(c),
              mesh.vertex(d)) < 0)
    std::swap(cell[0], cell[1]);
  return cell;
}

bool contains(const std::array<int, 4>& cell, int v) {
  return cell[0] == v || cell[1] == v || cell[2] == v || cell[3] == v;
}

} // namespace

std::array<int, 3> flip23(TetMesh& mesh, int t, int lf) {
  if (!mesh.alive(t)) throw IndexOutOfRange("flip23: dead tet");
  if (lf < 0 || lf > 3) throw IndexOutOfRange("flip23: face index");
  int nb = mesh.neighbors(t)[lf];
  if (nb < 0) throw NotFlippable("flip23: boundary face");

  const auto& cell = mesh.tet(t);
  int d = cell[lf];
  std::array<int, 3> face = {cell[kFaceCorners[lf][0]],
                             cell[kFaceCorners[lf][1]],
                             cell[kFaceCorners[lf][2]]};
  int e = -1;
  for (int v : mesh.tet(nb))
    if (v != face[0] && v != face[1] && v != face[2]) e = v;
  if (e < 0) throw CorruptRecord("flip23: neighbor does not share the face");

  const Vec3 pd = mesh.vertex(d), pe = mesh.vertex(e);
  double floor6 = 6.0 * mesh.volume_floor();
  double s[3];
  for (int j = 0; j < 3; ++j)
    s[j] = orient6(pd, pe, mesh.vertex(face[j]), mesh.vertex(face[(j + 1) % 3]));
  bool pos = s[0] > floor6 && s[1] > floor6 && s[2] > floor6;
  bool neg = s[0] < -floor6 && s[1] < -floor6 && s[2] < -floor6;
  if (!pos && !neg) throw NotFlippable("flip23: bipyramid is not convex");
  if (mesh.is_edge(d, e)) throw NotFlippable("flip23: apex edge already exists");

  std::array<std::array<int, 4>, 3> cells;
  for (int j = 0; j < 3; ++j) {
    int u = face[j], v = face[(j + 1) % 3];
    cells[j] = pos ? std::array<int, 4>{d, e, u, v}
                   : std::array<int, 4>{e, d, u, v};
  }
  std::array<int, 2> old = {t, nb};
  auto ids = mesh.replace_tets(old, cells);
  return {ids[0], ids[1], ids[2]};
}

std::array<int, 2> flip32(TetMesh& mesh, int a, int b) {
  EdgeStar star = mesh.edge_star(a, b);
  if (star.boundary || star.size() != 3)
    throw NotFlippable("flip32: edge ring is not an interior triple");
  int u = star.apex[0], v = star.apex[1], w = star.apex[2];
  if (!mesh.tets_with_face(u, v, w).empty())
    throw NotFlippable("flip32: link face already exists");

  double floor6 = 6.0 * mesh.volume_floor();
  double oa = orient6(mesh.vertex(u), mesh.vertex(v), mesh.vertex(w),
                      mesh.vertex(a));
  double ob = orient6(mesh.vertex(u), mesh.vertex(v), mesh.vertex(w),
                      mesh.vertex(b));
  if (std::abs(oa) <= floor6 || std::abs(ob) <= floor6 || oa * ob >= 0)
    throw NotFlippable("flip32: new tets would be degenerate or inverted");

  std::array<std::array<int, 4>, 2> cells = {
      oa > 0 ? std::array<int, 4>{u, v, w, a} : std::array<int, 4>{u, w, v, a},
      ob > 0 ? std::array<int, 4>{u, v, w, b} : std::array<int, 4>{u, w, v, b}};
  auto ids = mesh.replace_tets(star.tets, cells);
  return {ids[0], ids[1]};
}

FlipSearch::FlipSearch(TetMesh& mesh, int a, int b,
                       const FlipCriterion* criterion)
    : FlipSearch(mesh, a, b, criterion, {}, {-1, -1}, nullptr) {}

FlipSearch::FlipSearch(TetMesh& mesh, int a, int b,
                       const FlipCriterion* criterion, std::vector<int> locked,
                       std::array<int, 2> allowed, FlipSearch* root)
    : mesh_(mesh), va_(a), vb_(b), crit_(criterion),
      root_(root ? root : this), locked_(std::move(locked)),
      allowed_(allowed) {
  std::sort(locked_.begin(), locked_.end());
  init_ring();
}

FlipSearch::~FlipSearch() = default;

void FlipSearch::init_ring() {
  EdgeStar star = mesh_.edge_star(va_, vb_);
  if (star.boundary) throw NotFlippable("flipnm: boundary edge");
  ring_ = star.tets;
  apex_ = star.apex;
  n0_ = static_cast<int>(ring_.size());
  if (crit_) {
    ref_min_dih_ = std::numeric_limits<double>::infinity();
    ref_max_dih_ = 0;
    ref_max_ar_ = 0;
    for (int t : ring_) {
      auto pts = mesh_.tet_points(t);
      auto angles = dihedral_angles(pts);
      ref_min_dih_ = std::min(ref_min_dih_, *std::min_element(angles.begin(),
                                                              angles.end()));
      ref_max_dih_ = std::max(ref_max_dih_, *std::max_element(angles.begin(),
                                                              angles.end()));
      ref_max_ar_ = std::max(ref_max_ar_, aspect_ratio(pts));
    }
  }
}

bool FlipSearch::is_locked(int t) const {
  return std::binary_search(locked_.begin(), locked_.end(), t);
}

// Every mutation inside a search funnels through here so the top-level
// search can track the net effect: tets it created that are still alive,
// and original tets it destroyed that have not been restored. A new tet
// whose vertex set matches a destroyed original cancels that entry (undo
// steps rebuild originals under fresh ids).
std::vector<int> FlipSearch::do_replace(
    std::span<const int> old_ids, std::span<const std::array<int, 4>> cells) {
  FlipSearch* r = root_;
  std::vector<std::array<int, 4>> old_cells;
  old_cells.reserve(old_ids.size());
  for (int t : old_ids) {
    std::array<int, 4> c = mesh_.tet(t);
    std::sort(c.begin(), c.end());
    old_cells.push_back(c);
  }
  std::vector<int> ids = mesh_.replace_tets(old_ids, cells);
  for (std::size_t k = 0; k < old_ids.size(); ++k)
    if (r->created_.erase(old_ids[k]) == 0) ++r->destroyed_[old_cells[k]];
  for (int id : ids) {
    std::array<int, 4> c = mesh_.tet(id);
    std::sort(c.begin(), c.end());
    auto it = r->destroyed_.find(c);
    if (it != r->destroyed_.end()) {
      if (--it->second == 0) r->destroyed_.erase(it);
    } else {
      r->created_.insert(id);
    }
  }
  return ids;
}

bool FlipSearch::pair_ok(const std::array<Vec3, 4>& c1,
                         const std::array<Vec3, 4>& c2) const {
  if (!crit_) return true;
  if (crit_->mode == FlipMode::AspectRatio)
    return std::max(aspect_ratio(c1), aspect_ratio(c2)) < ref_max_ar_;
  auto a1 = dihedral_angles(c1);
  auto a2 = dihedral_angles(c2);
  double pmin = std::min(*std::min_element(a1.begin(), a1.end()),
                         *std::min_element(a2.begin(), a2.end()));
  double pmax = std::max(*std::max_element(a1.begin(), a1.end()),
                         *std::max_element(a2.begin(), a2.end()));
  return pmin > ref_min_dih_ ||
         (pmin == ref_min_dih_ && pmax < ref_max_dih_);
}

std::vector<int> FlipSearch::state_key() const {
  std::vector<int> key = apex_;
  std::sort(key.begin(), key.end());
  return key;
}

// Final acceptance test for the whole removal: the tets left behind (net
// creations plus the two cells of the pending 3-2 flip) must beat the tets
// destroyed (net destructions plus the last three ring tets) outright. The
// per-flip pair checks bound the region from below but their tie branch can
// stack up to a wash, so the commit decision looks at the full region.
bool FlipSearch::region_ok(const std::array<std::array<int, 4>, 2>& fin) const {
  const FlipSearch* r = root_;
  auto points = [&](const std::array<int, 4>& c) {
    std::array<Vec3, 4> pts = gather(mesh_, c);
    if (orient6(pts[0], pts[1], pts[2], pts[3]) < 0) std::swap(pts[0], pts[1]);
    return pts;
  };

  std::vector<std::array<Vec3, 4>> after, before;
  after.push_back(points(fin[0]));
  after.push_back(points(fin[1]));
  for (int id : r->created_)
    if (std::find(ring_.begin(), ring_.end(), id) == ring_.end())
      after.push_back(points(mesh_.tet(id)));
  for (const auto& [cell, n] : r->destroyed_)
    for (int k = 0; k < n; ++k) before.push_back(points(cell));
  for (int id : ring_)
    if (!r->created_.count(id)) before.push_back(points(mesh_.tet(id)));

  if (crit_->mode == FlipMode::AspectRatio) {
    double c_max = 0, d_max = 0;
    for (const auto& pts : after) c_max = std::max(c_max, aspect_ratio(pts));
    for (const auto& pts : before) d_max = std::max(d_max, aspect_ratio(pts));
    return c_max < d_max;
  }
  double c_min = 180, c_max = 0, d_min = 180, d_max = 0;
  for (const auto& pts : after) {
    auto a = dihedral_angles(pts);
    c_min = std::min(c_min, *std::min_element(a.begin(), a.end()));
    c_max = std::max(c_max, *std::max_element(a.begin(), a.end()));
  }
  for (const auto& pts : before) {
    auto a = dihedral_angles(pts);
    d_min = std::min(d_min, *std::min_element(a.begin(), a.end()));
    d_max = std::max(d_max, *std::max_element(a.begin(), a.end()));
  }
  return c_min > d_min || (c_min == d_min && c_max < d_max);
}

// The ring entry spanning apexes (pos-1, pos) and the one spanning
// (pos, pos+1) have been merged into a single bridge tet.
void FlipSearch::shrink_arrays(int pos, int bridge) {
  int n = static_cast<int>(ring_.size());
  apex_.erase(apex_.begin() + pos);
  if (pos > 0) {
    ring_[pos - 1] = bridge;
    ring_.erase(ring_.begin() + pos);
  } else {
    ring_.erase(ring_.begin());
    ring_.back() = bridge;
  }
  (void)n;
}

void FlipSearch::restore_arrays(int pos, int id_prev, int id_next, int cur) {
  apex_.insert(apex_.begin() + pos, cur);
  if (pos > 0) {
    ring_[pos - 1] = id_prev;
    ring_.insert(ring_.begin() + pos, id_next);
  } else {
    ring_.back() = id_prev;
    ring_.insert(ring_.begin(), id_next);
  }
}

bool FlipSearch::try_flip23_at(int i) {
  int n = static_cast<int>(ring_.size());
  int prev = apex_[(i + n - 1) % n];
  int cur = apex_[i];
  int next = apex_[(i + 1) % n];
  int t_prev = ring_[(i + n - 1) % n];
  int t_cur = ring_[i];
  if (is_locked(t_prev) || is_locked(t_cur)) return false;

  const Vec3 pp = mesh_.vertex(prev), pn = mesh_.vertex(next);
  double floor6 = 6.0 * mesh_.volume_floor();
  double s0 = orient6(pp, pn, mesh_.vertex(va_), mesh_.vertex(vb_));
  double s1 = orient6(pp, pn, mesh_.vertex(vb_), mesh_.vertex(cur));
  double s2 = orient6(pp, pn, mesh_.vertex(cur), mesh_.vertex(va_));
  bool pos = s0 > floor6 && s1 > floor6 && s2 > floor6;
  bool neg = s0 < -floor6 && s1 < -floor6 && s2 < -floor6;
  if (!pos && !neg) return false;
  if (mesh_.is_edge(prev, next)) return false;

  auto orient = [&](int p, int q) {
    return pos ? std::array<int, 4>{prev, next, p, q}
               : std::array<int, 4>{next, prev, p, q};
  };
  std::array<std::array<int, 4>, 3> cells = {
      orient(va_, vb_), orient(vb_, cur), orient(cur, va_)};
  if (crit_ && !pair_ok(gather(mesh_, cells[1]), gather(mesh_, cells[2])))
    return false;

  std::array<int, 2> old = {t_prev, t_cur};
  auto ids = do_replace(old, cells);
  shrink_arrays(i, ids[0]);
  recs_.push_back(Rec{i, prev, cur, next, nullptr});
  ++flip_count_;
  return true;
}

void FlipSearch::pop_flip23() {
  Rec rec = std::move(recs_.back());
  recs_.pop_back();
  EdgeStar star = mesh_.edge_star(rec.prev, rec.next);
  if (star.boundary || star.size() != 3)
    throw CorruptRecord("flip undo: apex edge ring is not a triple");
  std::array<std::array<int, 4>, 2> cells = {
      positive_cell(mesh_, va_, vb_, rec.cur, rec.prev),
      positive_cell(mesh_, va_, vb_, rec.cur, rec.next)};
  auto ids = do_replace(star.tets, cells);
  restore_arrays(rec.pos, ids[0], ids[1], rec.cur);
}

bool FlipSearch::try_child(int i, int x, int level) {
  int n = static_cast<int>(ring_.size());
  int prev = apex_[(i + n - 1) % n];
  int cur = apex_[i];
  int next = apex_[(i + 1) % n];

  // Skip edges carried by a tet an ancestor search still counts on.
  for (int t : mesh_.tets_of_vertex(cur))
    if (is_locked(t) && contains(mesh_.tet(t), x)) return false;

  EdgeStar star = mesh_.edge_star(x, cur);
  if (star.boundary) return false;

  std::vector<int> child_locked = locked_;
  child_locked.insert(child_locked.end(), ring_.begin(), ring_.end());
  std::array<int, 2> allowed = {ring_[(i + n - 1) % n], ring_[i]};

  auto child = std::unique_ptr<FlipSearch>(new FlipSearch(
      mesh_, x, cur, crit_, std::move(child_locked), allowed, root_));
  child->deny_removal = deny_removal;
  if (!child->search(level)) return false;

  // The child's final flip replaced this ring's two tets at cur with one
  // bridge tet spanning prev -> next.
  int bridge = -1;
  for (int t : mesh_.tets_with_face(va_, vb_, prev))
    if (contains(mesh_.tet(t), next)) bridge = t;
  if (bridge < 0) {
    child->undo_all();
    return false;
  }
  flip_count_ += child->flip_count_;
  shrink_arrays(i, bridge);
  recs_.push_back(Rec{i, prev, cur, next, std::move(child)});
  return true;
}

void FlipSearch::pop_child() {
  Rec rec = std::move(recs_.back());
  recs_.pop_back();
  rec.child->undo_all();
  auto pair = mesh_.tets_with_face(va_, vb_, rec.cur);
  if (pair.size() != 2)
    throw CorruptRecord("flip undo: child region did not restore");
  int id_prev = -1, id_next = -1;
  for (int t : pair) {
    if (contains(mesh_.tet(t), rec.prev)) id_prev = t;
    if (contains(mesh_.tet(t), rec.next)) id_next = t;
  }
  if (id_prev < 0 || id_next < 0)
    throw CorruptRecord("flip undo: child region did not restore");
  restore_arrays(rec.pos, id_prev, id_next, rec.cur);
}

bool FlipSearch::try_final_flip32() {
  if (deny_removal) return false;
  for (int t : ring_)
    if (is_locked(t) && t != allowed_[0] && t != allowed_[1]) return false;
  int u = apex_[0], v = apex_[1], w = apex_[2];
  if (!mesh_.tets_with_face(u, v, w).empty()) return false;

  double floor6 = 6.0 * mesh_.volume_floor();
  double oa = orient6(mesh_.vertex(u), mesh_.vertex(v), mesh_.vertex(w),
                      mesh_.vertex(va_));
  double ob = orient6(mesh_.vertex(u), mesh_.vertex(v), mesh_.vertex(w),
                      mesh_.vertex(vb_));
  if (std::abs(oa) <= floor6 || std::abs(ob) <= floor6 || oa * ob >= 0)
    return false;

  std::array<std::array<int, 4>, 2> cells = {
      oa > 0 ? std::array<int, 4>{u, v, w, va_}
             : std::array<int, 4>{u, w, v, va_},
      ob > 0 ? std::array<int, 4>{u, v, w, vb_}
             : std::array<int, 4>{u, w, v, vb_}};
  if (crit_ && !pair_ok(gather(mesh_, cells[0]), gather(mesh_, cells[1])))
    return false;
  if (crit_ && root_ == this && !region_ok(cells)) return false;

  do_replace(ring_, cells);
  final_tri_ = {u, v, w};
  done_ = true;
  ++flip_count_;
  return true;
}

void FlipSearch::undo_final() {
  auto pair = mesh_.tets_with_face(final_tri_[0], final_tri_[1], final_tri_[2]);
  if (pair.size() != 2)
    throw CorruptRecord("flip undo: link face is not shared by two tets");
  std::array<std::array<int, 4>, 3> cells;
  for (int j = 0; j < 3; ++j)
    cells[j] = positive_cell(mesh_, va_, vb_, final_tri_[j],
                             final_tri_[(j + 1) % 3]);
  auto ids = do_replace(pair, cells);
  ring_ = {ids[0], ids[1], ids[2]};
  apex_ = {final_tri_[0], final_tri_[1], final_tri_[2]};
  done_ = false;
  final_tri_ = {-1, -1, -1};
}

void FlipSearch::undo_all() {
  if (done_) undo_final();
  while (!recs_.empty()) {
    if (recs_.back().child)
      pop_child();
    else
      pop_flip23();
  }
}

bool FlipSearch::search(int level) {
  if (ring_.size() == 3) return try_final_flip32();
  auto key = state_key();
  if (failed_states_.count(key)) return false;

  int n = static_cast<int>(ring_.size());
  for (int i = 0; i < n; ++i) {
    if (!try_flip23_at(i)) continue;
    if (search(level)) return true;
    pop_flip23();
  }
  if (level > 0) {
    for (int i = 0; i < n; ++i) {
      for (int x : {va_, vb_}) {
        if (!try_child(i, x, level - 1)) continue;
        if (search(level)) return true;
        pop_child();
      }
    }
  }
  failed_states_.insert(std::move(key));
  return false;
}

FlipnmResult flipnm(FlipSearch& search, int level) {
  if (level < 0 || level > 2)
    throw InvalidInput("flip search level must be between 0 and 2");
  if (search.done_) return {true, search.ring_size()};
  bool done = search.search(level);
  return {done, search.ring_size()};
}

void flipnm_post(FlipSearch& search, bool undo) {
  if (undo) search.undo_all();
  search.recs_.clear();
  search.failed_states_.clear();
}

LazyPassStats lazy_pass(TetMesh& mesh, const FlipCriterion& crit, int level,
                        std::vector<FlipTraceRow>* trace) {
  if (level < 0 || level > 2)
    throw InvalidInput("flip search level must be between 0 and 2");
  constexpr int kMaxSweeps = 100;

  auto objective = [&](const std::vector<int>& tets) {
    double val = crit.mode == FlipMode::AspectRatio
                     ? 0.0
                     : std::numeric_limits<double>::infinity();
    for (int t : tets) {
      auto pts = mesh.tet_points(t);
      if (crit.mode == FlipMode::AspectRatio)
        val = std::max(val, aspect_ratio(pts));
      else
        val = std::min(val, min_dihedral(pts));
    }
    return val;
  };

  LazyPassStats stats;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    struct Cand {
      double q;
      int a, b;
    };
    std::vector<Cand> cands;
    std::set<std::pair<int, int>> seen;
    for (int t : mesh.live_tets()) {
      const auto& c = mesh.tet(t);
      for (int p = 0; p < 4; ++p) {
        for (int q = p + 1; q < 4; ++q) {
          int a = std::min(c[p], c[q]), b = std::max(c[p], c[q]);
          if (!seen.insert({a, b}).second) continue;
          EdgeStar star = mesh.edge_star(a, b);
          if (star.boundary) continue;
          double local = std::numeric_limits<double>::infinity();
          for (int rt : star.tets)
            local = std::min(local, min_dihedral(mesh.tet_points(rt)));
          cands.push_back({local, a, b});
        }
      }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& l, const Cand& r) {
      return l.q != r.q ? l.q < r.q : std::tie(l.a, l.b) < std::tie(r.a, r.b);
    });

    int removed = 0;
    for (const Cand& cand : cands) {
      if (!mesh.is_edge(cand.a, cand.b)) continue;
      FlipSearch search(mesh, cand.a, cand.b, &crit);
      double before = trace ? objective(search.ring()) : 0.0;
      FlipnmResult res = flipnm(search, level);
      if (trace) {
        double after = before;
        if (res.done) {
          std::vector<int> ids(search.created_ids().begin(),
                               search.created_ids().end());
          after = objective(ids);
        }
        trace->push_back({cand.a, cand.b, level, res.done, before, after});
      }
      flipnm_post(search, !res.done);
      if (res.done) ++removed;
    }
    ++stats.sweeps;
    stats.removals += removed;
    if (removed == 0) break;
  }
  return stats;
}

} // namespace tetimp
