#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "join2pn/analysis.hpp"

namespace join2pn {

namespace {

using Colour = int;
using Sig = std::tuple<std::vector<PlaceId>, std::vector<PlaceId>, std::string>;

std::string binder_text(const JoinNet& net, const Name& n, const ScopeStack& s) {
  const auto top = s.top();
  if (!top) return "f:" + n;
  auto it = net.definitions().find(top->def);
  if (it == net.definitions().end()) return "?:" + n;
  const auto& chans = it->second.channels;
  const auto pos = std::find(chans.begin(), chans.end(), n) - chans.begin();
  return "b:" + it->second.label.alpha + "#" + std::to_string(pos);
}

std::string place_text(const JoinNet& net, const Place& p) {
  std::string out = contains(net.initial(), p.id) ? "m0|" : "|";
  out += binder_text(net, p.core.channel, p.core.sender);
  for (std::size_t i = 0; i < p.core.args.size(); ++i)
    out += "," + binder_text(net, p.core.args[i], p.core.arg_scopes[i]);
  return out;
}

// Colour refinement run on both nets with one shared palette.
struct Palette {
  std::map<std::string, Colour> ids;
  Colour of(const std::string& s) { return ids.emplace(s, static_cast<Colour>(ids.size())).first->second; }
};

struct Colouring {
  std::vector<Colour> place;
  std::vector<Colour> trans;
};

std::string joined(std::vector<Colour> v) {
  std::sort(v.begin(), v.end());
  std::string s;
  for (auto c : v) s += std::to_string(c) + ",";
  return s;
}

Colouring refine_step(const JoinNet& net, const Colouring& c, Palette& pal) {
  Colouring out;
  for (const auto& p : net.places()) {
    std::vector<Colour> cons, prod;
    for (auto t : net.consumers(p.id)) cons.push_back(c.trans[t]);
    for (auto t : net.producers(p.id)) prod.push_back(c.trans[t]);
    out.place.push_back(pal.of("p" + std::to_string(c.place[p.id]) + "/" + joined(cons) + "/" + joined(prod)));
  }
  for (const auto& t : net.transitions()) {
    std::vector<Colour> pre, post;
    for (auto p : t.preset) pre.push_back(c.place[p]);
    for (auto p : t.postset) post.push_back(c.place[p]);
    out.trans.push_back(pal.of("t" + std::to_string(c.trans[t.id]) + "/" + joined(pre) + "/" + joined(post)));
  }
  return out;
}

std::size_t classes(const Colouring& a, const Colouring& b) {
  std::set<std::pair<bool, Colour>> s;
  for (auto c : a.place) s.insert({true, c});
  for (auto c : b.place) s.insert({true, c});
  for (auto c : a.trans) s.insert({false, c});
  for (auto c : b.trans) s.insert({false, c});
  return s.size();
}

template <class T>
std::map<T, std::size_t> histogram(const std::vector<T>& v) {
  std::map<T, std::size_t> h;
  for (const auto& x : v) ++h[x];
  return h;
}

class Matcher {
 public:
  Matcher(const JoinNet& a, const JoinNet& b, const Colouring& ca, const Colouring& cb)
      : a_(a), b_(b), ca_(ca), cb_(cb) {
    const std::size_t np = a.places().size();
    map_.assign(np, kUnmapped);
    used_.assign(b.places().size(), false);
    incident_.resize(np);
    pending_.resize(a.transitions().size());
    for (const auto& t : a.transitions()) {
      std::vector<PlaceId> inc = t.preset;
      inc.insert(inc.end(), t.postset.begin(), t.postset.end());
      std::sort(inc.begin(), inc.end());
      inc.erase(std::unique(inc.begin(), inc.end()), inc.end());
      pending_[t.id] = inc.size();
      for (auto p : inc) incident_[p].push_back(t.id);
    }
    for (const auto& t : b.transitions()) ++available_[sig(t, false)];

    // Rarest colours first, then by id.
    const auto hist = histogram(ca.place);
    order_.resize(np);
    for (std::size_t i = 0; i < np; ++i) order_[i] = static_cast<PlaceId>(i);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](PlaceId x, PlaceId y) { return hist.at(ca.place[x]) < hist.at(ca.place[y]); });
  }

  bool run() { return extend(0); }
  bool exhausted() const { return budget_ == 0; }
  const std::vector<PlaceId>& place_map() const { return map_; }

  std::vector<TransId> transition_map() const {
    std::map<Sig, std::vector<TransId>> pool;
    for (auto it = b_.transitions().rbegin(); it != b_.transitions().rend(); ++it)
      pool[sig(*it, false)].push_back(it->id);
    std::vector<TransId> out;
    for (const auto& t : a_.transitions()) {
      auto& v = pool[sig(t, true)];
      out.push_back(v.back());
      v.pop_back();
    }
    return out;
  }

 private:
  static constexpr PlaceId kUnmapped = static_cast<PlaceId>(-1);

  Sig sig(const Transition& t, bool through_map) const {
    auto image = [&](const std::vector<PlaceId>& v) {
      std::vector<PlaceId> out;
      for (auto p : v) out.push_back(through_map ? map_[p] : p);
      std::sort(out.begin(), out.end());
      return out;
    };
    return {image(t.preset), image(t.postset), t.label.alpha};
  }

  bool extend(std::size_t i) {
    if (i == order_.size()) return true;
    const PlaceId p = order_[i];
    for (const auto& q : b_.places()) {
      if (budget_ == 0) return false;
      --budget_;
      if (used_[q.id] || cb_.place[q.id] != ca_.place[p]) continue;
      map_[p] = q.id;
      used_[q.id] = true;
      std::vector<Sig> taken;
      bool ok = true;
      for (auto t : incident_[p]) {
        if (--pending_[t] != 0) continue;
        Sig s = sig(a_.transition(t), true);
        if (++used_sigs_[s] > available_[s]) ok = false;
        taken.push_back(std::move(s));
      }
      if (ok && extend(i + 1)) return true;
      for (const auto& s : taken) --used_sigs_[s];
      for (auto t : incident_[p]) ++pending_[t];
      used_[q.id] = false;
      map_[p] = kUnmapped;
    }
    return false;
  }

  const JoinNet& a_;
  const JoinNet& b_;
  const Colouring& ca_;
  const Colouring& cb_;
  std::vector<PlaceId> map_;
  std::vector<bool> used_;
  std::vector<std::vector<TransId>> incident_;
  std::vector<std::size_t> pending_;
  std::map<Sig, std::size_t> available_;
  std::map<Sig, std::size_t> used_sigs_;
  std::vector<PlaceId> order_;
  std::size_t budget_ = 20'000'000;
};

}  // namespace

IsoResult iso_check(const JoinNet& a, const JoinNet& b) {
  IsoResult r;
  if (a.places().size() != b.places().size()) {
    r.reason = "place counts differ";
    return r;
  }
  if (a.transitions().size() != b.transitions().size()) {
    r.reason = "transition counts differ";
    return r;
  }
  if (a.initial().size() != b.initial().size()) {
    r.reason = "initial markings differ in size";
    return r;
  }

  Palette pal;
  Colouring ca, cb;
  for (const auto& p : a.places()) ca.place.push_back(pal.of(place_text(a, p)));
  for (const auto& p : b.places()) cb.place.push_back(pal.of(place_text(b, p)));
  for (const auto& t : a.transitions()) ca.trans.push_back(pal.of("L" + t.label.alpha));
  for (const auto& t : b.transitions()) cb.trans.push_back(pal.of("L" + t.label.alpha));

  std::size_t n = classes(ca, cb);
  while (true) {
    if (histogram(ca.place) != histogram(cb.place) || histogram(ca.trans) != histogram(cb.trans)) {
      r.reason = "colour classes differ";
      return r;
    }
    Colouring na = refine_step(a, ca, pal);
    Colouring nb = refine_step(b, cb, pal);
    const std::size_t m = classes(na, nb);
    ca = std::move(na);
    cb = std::move(nb);
    if (m == n) break;
    n = m;
  }
  if (histogram(ca.place) != histogram(cb.place) || histogram(ca.trans) != histogram(cb.trans)) {
    r.reason = "colour classes differ";
    return r;
  }

  Matcher matcher(a, b, ca, cb);
  if (!matcher.run()) {
    r.reason = matcher.exhausted() ? "search budget exhausted" : "no structure-preserving bijection";
    return r;
  }
  r.isomorphic = true;
  r.place_map = matcher.place_map();
  r.transition_map = matcher.transition_map();
  return r;
}

}  // namespace join2pn
