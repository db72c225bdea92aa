#include "dendro/forests.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "dendro/error.hpp"

namespace dendro {

PointedMap identity_pointed(int n) {
  PointedMap m{n, n, {}};
  m.map.resize(n);
  std::iota(m.map.begin(), m.map.end(), 0);
  return m;
}

PointedMap rho(int n, int j) {
  require(j >= 0 && j < n, "rho: index out of range");
  PointedMap m{n, 1, std::vector<int>(n, -1)};
  m.map[j] = 0;
  return m;
}

PointedMap compose(const PointedMap& g, const PointedMap& f) {
  require(f.dst == g.src, "compose: pointed map mismatch");
  PointedMap h{f.src, g.dst, {}};
  h.map.resize(f.src);
  for (int i = 0; i < f.src; ++i)
    h.map[i] = f.map[i] == -1 ? -1 : g.map[f.map[i]];
  return h;
}

std::vector<PointedMap> all_pointed_maps(int src, int dst) {
  std::vector<PointedMap> out;
  PointedMap m{src, dst, std::vector<int>(src, -1)};
  auto rec = [&](auto&& self, int i) -> void {
    if (i == src) {
      out.push_back(m);
      return;
    }
    for (int v = -1; v < dst; ++v) {
      m.map[i] = v;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

ForestArrow arrow_from_map(const PointedMap& alpha) {
  ForestArrow f;
  f.src = alpha.src;
  f.dst = alpha.dst;
  f.corolla_inputs.assign(alpha.dst, {});
  for (int i = 0; i < alpha.src; ++i) {
    if (alpha.map[i] == -1)
      f.eta_labels.push_back(i);
    else
      f.corolla_inputs[alpha.map[i]].push_back(i);
  }
  return f;
}

PointedMap map_from_arrow(const ForestArrow& f) {
  PointedMap alpha{f.src, f.dst, std::vector<int>(f.src, -2)};
  for (int j = 0; j < f.dst; ++j)
    for (int i : f.corolla_inputs[j]) {
      require(i >= 0 && i < f.src && alpha.map[i] == -2, "arrow: bad labelling");
      alpha.map[i] = j;
    }
  for (int i : f.eta_labels) {
    require(i >= 0 && i < f.src && alpha.map[i] == -2, "arrow: bad labelling");
    alpha.map[i] = -1;
  }
  for (int v : alpha.map) require(v != -2, "arrow: unlabelled source element");
  return alpha;
}

ForestArrow compose_arrows(const ForestArrow& g, const ForestArrow& f) {
  require(f.dst == g.src, "compose_arrows: size mismatch");
  ForestArrow out;
  out.src = f.src;
  out.dst = g.dst;
  out.eta_labels = f.eta_labels;

  for (int j = 0; j < g.dst; ++j) {
    // graft f's corollas onto g's labelled leaves, contracting as we go
    Tree tree = Tree::corolla(static_cast<int>(g.corolla_inputs[j].size()));
    std::map<int, int> leaf_label;  // leaf edge -> label in g's source
    for (size_t s = 0; s < g.corolla_inputs[j].size(); ++s)
      leaf_label[1 + static_cast<int>(s)] = g.corolla_inputs[j][s];

    std::map<int, int> final_label;  // leaf edge -> label in f's source
    while (!leaf_label.empty()) {
      auto [leaf, mid_label] = *leaf_label.begin();
      leaf_label.erase(leaf_label.begin());
      const std::vector<int>& ins = f.corolla_inputs[mid_label];
      Grafted gr = graft_tracked(tree, leaf, Tree::corolla(static_cast<int>(ins.size())));
      std::map<int, int> moved;
      for (const auto& [e, lab] : final_label) moved[gr.base_edges[e]] = lab;
      final_label = std::move(moved);
      std::map<int, int> next_leaf;
      for (const auto& [e, lab] : leaf_label) next_leaf[gr.base_edges[e]] = lab;
      leaf_label = std::move(next_leaf);
      for (size_t s = 0; s < ins.size(); ++s)
        final_label[gr.scion_edges[1 + static_cast<int>(s)]] = ins[s];
      // contract the identified edge
      int identified = gr.base_edges[leaf];
      FaceMono contract = inner_face(gr.tree, identified);
      std::vector<int> inv(gr.tree.edge_count(), -1);
      for (int e = 0; e < contract.mono.domain.edge_count(); ++e)
        inv[contract.mono.edge_map[e]] = e;
      std::map<int, int> after;
      for (const auto& [e, lab] : final_label) after[inv[e]] = lab;
      final_label = std::move(after);
      std::map<int, int> after_leaf;
      for (const auto& [e, lab] : leaf_label) after_leaf[inv[e]] = lab;
      leaf_label = std::move(after_leaf);
      tree = contract.mono.domain;
    }
    require(tree.vertex_count() == 1, "compose_arrows: grafting did not flatten");
    std::vector<int> labels;
    for (const auto& [e, lab] : final_label) labels.push_back(lab);
    std::sort(labels.begin(), labels.end());
    require(labels.size() == static_cast<size_t>(tree.arity(tree.root())),
            "compose_arrows: label mismatch");
    out.corolla_inputs.push_back(std::move(labels));
  }

  // sources dying in g absorb the inputs of f's corollas over them
  for (int mid : g.eta_labels)
    for (int i : f.corolla_inputs[mid]) out.eta_labels.push_back(i);
  std::sort(out.eta_labels.begin(), out.eta_labels.end());
  return out;
}

Chain simplicial_face(int i, const Chain& c) {
  require(i >= 0 && i <= c.k(), "simplicial_face: index out of range");
  require(c.k() >= 1, "simplicial_face: chain has no maps");
  Chain out;
  for (int j = 0; j <= c.k(); ++j)
    if (j != i) out.objects.push_back(c.objects[j]);
  if (i == 0) {
    out.maps.assign(c.maps.begin() + 1, c.maps.end());
  } else if (i == c.k()) {
    out.maps.assign(c.maps.begin(), c.maps.end() - 1);
  } else {
    out.maps.assign(c.maps.begin(), c.maps.begin() + (i - 1));
    out.maps.push_back(compose(c.maps[i], c.maps[i - 1]));
    out.maps.insert(out.maps.end(), c.maps.begin() + i + 1, c.maps.end());
  }
  return out;
}

Chain simplicial_degeneracy(int i, const Chain& c) {
  require(i >= 0 && i <= c.k(), "simplicial_degeneracy: index out of range");
  Chain out;
  for (int j = 0; j <= c.k(); ++j) {
    out.objects.push_back(c.objects[j]);
    if (j == i) out.objects.push_back(c.objects[j]);
  }
  for (int j = 0; j < i; ++j) out.maps.push_back(c.maps[j]);
  out.maps.push_back(identity_pointed(c.objects[i]));
  for (int j = i; j < c.k(); ++j) out.maps.push_back(c.maps[j]);
  return out;
}

Chain parse_chain(const std::string& text) {
  auto colon = text.find(':');
  std::string sizes_part = colon == std::string::npos ? text : text.substr(0, colon);
  Chain c;
  {
    std::stringstream ss(sizes_part);
    std::string item;
    while (std::getline(ss, item, '>')) {
      item.erase(std::remove(item.begin(), item.end(), ' '), item.end());
      require(!item.empty() && item.find_first_not_of("0123456789") == std::string::npos,
              "chain: bad object '" + item + "'");
      c.objects.push_back(std::stoi(item));
    }
  }
  require(!c.objects.empty(), "chain: no objects");
  for (size_t i = 0; i + 1 < c.objects.size(); ++i)
    c.maps.push_back(PointedMap{c.objects[i], c.objects[i + 1],
                                std::vector<int>(c.objects[i], -2)});
  if (colon != std::string::npos) {
    std::stringstream groups(text.substr(colon + 1));
    std::string group;
    size_t gi = 0;
    while (std::getline(groups, group, ';')) {
      require(gi < c.maps.size(), "chain: more map groups than maps");
      std::stringstream ss(group);
      std::string pair;
      while (std::getline(ss, pair, ',')) {
        pair.erase(std::remove(pair.begin(), pair.end(), ' '), pair.end());
        if (pair.empty()) continue;
        auto arrow = pair.find("->");
        require(arrow != std::string::npos, "chain: expected 'i->j' in '" + pair + "'");
        int src = std::stoi(pair.substr(0, arrow)) - 1;
        std::string dst = pair.substr(arrow + 2);
        require(src >= 0 && src < c.maps[gi].src, "chain: source out of range");
        c.maps[gi].map[src] = dst == "*" ? -1 : std::stoi(dst) - 1;
        require(c.maps[gi].map[src] >= -1 && c.maps[gi].map[src] < c.maps[gi].dst,
                "chain: target out of range");
      }
      ++gi;
    }
  }
  for (const PointedMap& m : c.maps)
    for (int v : m.map) require(v != -2, "chain: unassigned source element");
  return c;
}

std::string format_chain(const Chain& c) {
  std::string out;
  for (size_t i = 0; i < c.objects.size(); ++i) {
    if (i) out += ">";
    out += std::to_string(c.objects[i]);
  }
  if (c.k() == 0) return out;
  out += ": ";
  for (int m = 0; m < c.k(); ++m) {
    if (m) out += "; ";
    for (int i = 0; i < c.maps[m].src; ++i) {
      if (i) out += ",";
      out += std::to_string(i + 1) + "->";
      out += c.maps[m].map[i] == -1 ? "*" : std::to_string(c.maps[m].map[i] + 1);
    }
  }
  return out;
}

namespace {

struct Node {
  int level;
  int idx;
};

int dsu_find(std::vector<int>& up, int x) {
  while (up[x] != x) x = up[x] = up[up[x]];
  return x;
}

}  // namespace

ForestSimplex chain_to_forest(const Chain& c) {
  const int k = c.k();
  ForestSimplex f;
  f.chain = c;
  std::vector<int> offset(k + 2, 0);
  for (int j = 0; j <= k; ++j) offset[j + 1] = offset[j] + c.objects[j];
  const int n = offset[k + 1];
  auto node_id = [&](int level, int idx) { return offset[level] + idx; };

  std::vector<int> up(n);
  std::iota(up.begin(), up.end(), 0);
  for (int j = 0; j < k; ++j) {
    for (int x = 0; x < c.objects[j]; ++x) {
      int y = c.maps[j].map[x];
      if (y != -1) up[dsu_find(up, node_id(j, x))] = dsu_find(up, node_id(j + 1, y));
    }
  }

  std::map<int, std::vector<Node>> groups;
  for (int j = 0; j <= k; ++j)
    for (int x = 0; x < c.objects[j]; ++x)
      groups[dsu_find(up, node_id(j, x))].push_back({j, x});

  struct Pre {
    std::vector<Node> nodes;  // sorted by (level desc, idx asc): root first
    int death = 0;
    int min_label0 = 1 << 20;
    std::string code;
    Node min_pos{1 << 20, 1 << 20};
  };
  std::vector<Pre> pres;
  std::vector<ForestComponent> comps;
  for (auto& [root, nodes] : groups) {
    Pre pre;
    std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) {
      if (a.level != b.level) return a.level > b.level;
      return a.idx < b.idx;
    });
    pre.nodes = nodes;
    const Node& r = pre.nodes.front();
    pre.death = r.level == k ? 0 : r.level + 1;
    for (const Node& nd : nodes) {
      if (nd.level == 0) pre.min_label0 = std::min(pre.min_label0, nd.idx);
      if (std::tie(nd.level, nd.idx) < std::tie(pre.min_pos.level, pre.min_pos.idx))
        pre.min_pos = nd;
    }

    std::map<std::pair<int, int>, int> id_of;
    for (size_t i = 0; i < pre.nodes.size(); ++i)
      id_of[{pre.nodes[i].level, pre.nodes[i].idx}] = static_cast<int>(i);
    Tree::Data d;
    d.root = 0;
    d.parent.assign(pre.nodes.size(), -1);
    d.is_vertex.assign(pre.nodes.size(), 0);
    for (size_t i = 0; i < pre.nodes.size(); ++i) {
      const Node& nd = pre.nodes[i];
      if (nd.level >= 1) d.is_vertex[i] = 1;
      if (nd.level < k && c.maps[nd.level].map[nd.idx] != -1)
        d.parent[i] = id_of.at({nd.level + 1, c.maps[nd.level].map[nd.idx]});
    }
    ForestComponent comp;
    comp.tree = Tree::from_data(d);
    comp.death_level = pre.death;
    for (const Node& nd : pre.nodes) comp.chain_pos.push_back({nd.level, nd.idx});
    pre.code = comp.tree.canonical_code();
    pres.push_back(std::move(pre));
    comps.push_back(std::move(comp));
  }

  std::vector<size_t> order(comps.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (pres[a].min_label0 != pres[b].min_label0)
      return pres[a].min_label0 < pres[b].min_label0;
    if (pres[a].code != pres[b].code) return pres[a].code < pres[b].code;
    return std::tie(pres[a].min_pos.level, pres[a].min_pos.idx) <
           std::tie(pres[b].min_pos.level, pres[b].min_pos.idx);
  });
  for (size_t i : order) f.components.push_back(std::move(comps[i]));

  f.pos_to_edge.assign(k + 1, {});
  for (int j = 0; j <= k; ++j) f.pos_to_edge[j].assign(c.objects[j], {-1, -1});
  for (size_t ci = 0; ci < f.components.size(); ++ci) {
    const ForestComponent& comp = f.components[ci];
    for (int e = 0; e < comp.tree.edge_count(); ++e) {
      auto [lvl, idx] = comp.chain_pos[e];
      f.pos_to_edge[lvl][idx] = {static_cast<int>(ci), e};
    }
  }
  return f;
}

Chain forest_to_chain(const ForestSimplex& f) {
  const int k = f.k();
  Chain c;
  c.objects.assign(k + 1, 0);
  for (const ForestComponent& comp : f.components)
    for (const auto& [lvl, idx] : comp.chain_pos)
      c.objects[lvl] = std::max(c.objects[lvl], idx + 1);
  for (int j = 0; j < k; ++j)
    c.maps.push_back(PointedMap{c.objects[j], c.objects[j + 1],
                                std::vector<int>(c.objects[j], -1)});
  for (const ForestComponent& comp : f.components) {
    for (int e = 0; e < comp.tree.edge_count(); ++e) {
      auto [lvl, idx] = comp.chain_pos[e];
      int par = comp.tree.parent(e);
      if (par >= 0) {
        auto [plvl, pidx] = comp.chain_pos[par];
        require(plvl == lvl + 1, "forest: vertex does not connect consecutive levels");
        c.maps[lvl].map[idx] = pidx;
      }
    }
  }
  return c;
}

bool is_uprooted(const ForestComponent& c) { return c.death_level > 0; }

FaceInclusion face_inclusion(int i, const ForestSimplex& f) {
  FaceInclusion out;
  out.face = chain_to_forest(simplicial_face(i, f.chain));
  for (const ForestComponent& fc : out.face.components) {
    int orig_comp = -1;
    std::vector<int> map(fc.tree.edge_count(), -1);
    for (int e = 0; e < fc.tree.edge_count(); ++e) {
      auto [lvl, idx] = fc.chain_pos[e];
      int olvl = lvl < i ? lvl : lvl + 1;
      auto [oc, oe] = f.pos_to_edge[olvl][idx];
      require(oc >= 0, "face_inclusion: untracked chain position");
      require(orig_comp == -1 || orig_comp == oc,
              "face_inclusion: face component spans original components");
      orig_comp = oc;
      map[e] = oe;
    }
    OmegaMorphism m{fc.tree, f.components[orig_comp].tree, std::move(map)};
    require(validate_morphism(m) && is_mono(m),
            "face_inclusion: induced map is not a face mono");
    out.comps.push_back({orig_comp, std::move(m)});
  }
  return out;
}

DegeneracyInclusion degeneracy_inclusion(int i, const ForestSimplex& f) {
  DegeneracyInclusion out;
  out.degenerate = chain_to_forest(simplicial_degeneracy(i, f.chain));
  std::vector<bool> seen(f.components.size(), false);
  for (const ForestComponent& dc : out.degenerate.components) {
    int orig_comp = -1;
    std::vector<int> map(dc.tree.edge_count(), -1);
    for (int e = 0; e < dc.tree.edge_count(); ++e) {
      auto [lvl, idx] = dc.chain_pos[e];
      int olvl = lvl <= i ? lvl : lvl - 1;
      auto [oc, oe] = f.pos_to_edge[olvl][idx];
      require(oc >= 0, "degeneracy_inclusion: untracked chain position");
      require(orig_comp == -1 || orig_comp == oc,
              "degeneracy_inclusion: component spans original components");
      orig_comp = oc;
      map[e] = oe;
    }
    require(!seen[orig_comp], "degeneracy_inclusion: component hit twice");
    seen[orig_comp] = true;
    OmegaMorphism m{dc.tree, f.components[orig_comp].tree, std::move(map)};
    require(validate_morphism(m), "degeneracy_inclusion: induced map invalid");
    out.comps.push_back({orig_comp, std::move(m)});
  }
  return out;
}

namespace {

std::vector<Subcomplex> faces_union(const std::vector<int>& faces, const ForestSimplex& f) {
  std::vector<std::vector<FaceMono>> gens(f.components.size());
  for (int i : faces) {
    FaceInclusion inc = face_inclusion(i, f);
    for (const FaceInclusion::CompMap& cm : inc.comps) {
      FaceMono fm;
      fm.mono = cm.mono;
      fm.kind = FaceKind::Composite;
      fm.image = cm.mono.image();
      gens[cm.original_component].push_back(std::move(fm));
    }
  }
  std::vector<Subcomplex> out;
  for (size_t ci = 0; ci < f.components.size(); ++ci) {
    Subcomplex sc = Subcomplex::closure(f.components[ci].tree, gens[ci]);
    require(!sc.empty(), "forest subcomplex: component not covered by any face");
    out.push_back(std::move(sc));
  }
  return out;
}

}  // namespace

std::vector<Subcomplex> rl_subcomplex(const ForestSimplex& f) {
  require(f.k() >= 2, "rl_subcomplex: needs k >= 2");
  return faces_union({0, f.k()}, f);
}

std::vector<Subcomplex> horn_subcomplex(int j, const ForestSimplex& f) {
  require(f.k() >= 2, "horn_subcomplex: needs k >= 2");
  require(j >= 0 && j <= f.k(), "horn_subcomplex: index out of range");
  std::vector<int> faces;
  for (int i = 0; i <= f.k(); ++i)
    if (i != j) faces.push_back(i);
  return faces_union(faces, f);
}

long long ForestExtension::total() const {
  long long t = 1;
  for (const auto& v : per_component) t *= static_cast<long long>(v.size());
  return t;
}

ForestExtension forest_extend(const ForestSimplex& f, const std::vector<Subcomplex>& subs,
                              const std::vector<PresheafMap>& maps, const Operad& p) {
  require(subs.size() == f.components.size() && maps.size() == subs.size(),
          "forest_extend: one subcomplex and map per component");
  ForestExtension ext;
  for (size_t ci = 0; ci < subs.size(); ++ci) {
    Subcomplex full = Subcomplex::full(f.components[ci].tree);
    ext.per_component.push_back(extend(subs[ci], full, maps[ci], p));
  }
  return ext;
}

std::vector<std::vector<PresheafMap>> forest_maps_to_nerve(
    const std::vector<Subcomplex>& subs, const Operad& p) {
  std::vector<std::vector<PresheafMap>> per;
  for (const Subcomplex& s : subs) per.push_back(maps_to_nerve(s, p));
  std::vector<std::vector<PresheafMap>> out;
  std::vector<PresheafMap> tuple(subs.size());
  auto rec = [&](auto&& self, size_t i) -> void {
    if (i == subs.size()) {
      out.push_back(tuple);
      return;
    }
    for (const PresheafMap& m : per[i]) {
      tuple[i] = m;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace dendro
