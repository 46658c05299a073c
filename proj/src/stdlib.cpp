#include "xc/stdlib.hpp"

#include "xc/lang.hpp"

namespace xc::lib {

const std::string& prelude() {
  static const std::string kPrelude = R"XC(
// return/send shorthand for exchange bodies
def retsend(v) { pair(v, v) }

// rounds executed so far in the enclosing aligned context (1 on the first)
def counter() { self(exchange(0, (n) => retsend(self(n) + 1))) }

def minHood(w, init) { nfold(min, w, init) }
def orHood(w) { nfold(or, w, false) }

// adaptive Bellman-Ford distance from the nearest source
def gradient(src) {
  self(exchange(inf(), (n) =>
    retsend(mux(src, 0.0, nfold(min, n + nsense("nbr_dist"), inf())))))
}

// "phi held at some causally past event", monotone per device
def ep(phi) {
  self(exchange(false, (n) => retsend(phi or self(n) or nfold(or, n, false))))
}

// "phi holds somewhere right now", via the distance bound dia
def somewhereSlcs(phi, dia) { gradient(phi) <= dia }

def sharedClock() { sense("current_time") }

// gossiped alternative: max perceived time, advanced by the local elapsed time
def sharedClockGossip() {
  val t = sense("current_time");
  self(exchange(pair(t, t), (n) =>
    val prev = self(n);
    val est = max(t, snd(prev) + (t - fst(prev)));
    val best = nfold((a, p) => max(a, snd(p)), n, est);
    pair(best, pair(t, best))))
}

// n staggered instances of f, one new every t seconds; reads the oldest alive
def replicate(f, n, t) {
  val now = floor(sharedClock() / t);
  val res = spawn((i) => pair(f(), i > now - n), setAdd(emptySet(), now));
  val oldest = mapFold((acc, k, v) => mux((k > now - n) and (k < acc), k, acc), res, now);
  mapGet(res, oldest)
}

def somewhereRep(phi, reps, dia, speed) {
  replicate(() => ep(phi), reps, dia / (speed * (reps - 1)))
}

// every device adopts the value of its minimum-gradient neighbour
def broadcast(src, v) {
  val g = gradient(src);
  self(exchange(pair(inf(), v), (n) =>
    val best = nfold((a, b) => mux(fst(b) < fst(a), b, a), n, pair(inf(), v));
    val out = mux(src or (fst(best) == inf()), v, snd(best));
    pair(out, pair(g, out))))
}

// Shortest-path-tree towards the root. Returns an nvalue of triples
// (gradient, (parent, below-set)): the self entry is this device's own data,
// neighbour entries are theirs as of their last round.
def spanningTree(root) {
  val g = gradient(root);
  exchange(pair(inf(), pair(uid(), emptySet())), (n) =>
    val ids = nsense("nbr_uid");
    val scores = nmap((x) => fst(x), n) + nsense("nbr_dist");
    val cand = nfold((a, b) =>
                 mux((fst(b) < fst(a)) or ((fst(b) == fst(a)) and (snd(b) < snd(a))), b, a),
               nmap((s, d) => pair(s, d), scores, ids), pair(inf(), uid()));
    val par = mux(root or (fst(cand) == inf()), uid(), snd(cand));
    val below = setAdd(nfold((acc, x) =>
                  mux(fst(snd(x)) == uid(), setUnion(acc, snd(snd(x))), acc),
                n, emptySet()), uid());
    val mine = pair(g, pair(par, below));
    pair(updateSelf(n, mine), mine))
}

// one gradient instance per source device, withdrawn when g rises past theta
def multiGradient(isSrc, theta) {
  spawn((k) => (
    val amSrc = isSrc and (uid() == k);
    val g = gradient(amSrc);
    pair(g, amSrc or (g < theta))
  ), mux(isSrc, setAdd(emptySet(), uid()), emptySet()))
}
)XC";
  return kPrelude;
}

namespace {

ExprPtr compile(const std::string& text) {
  lang::ParseResult pr = lang::parse_text(text);
  std::string msgs;
  for (const auto& d : pr.diagnostics)
    if (d.severity == lang::Severity::Error) msgs += d.format() + "\n";
  if (!pr.expr || !msgs.empty()) throw CompileError("parse failed:\n" + msgs);
  for (const auto& d : lang::check_program(pr.expr))
    if (d.severity == lang::Severity::Error) msgs += d.format() + "\n";
  if (!msgs.empty()) throw CompileError("check failed:\n" + msgs);
  return annotate(pr.expr);
}

}  // namespace

ExprPtr compile_program(const std::string& body) {
  return compile(prelude() + "\n" + body + "\n");
}

ExprPtr compile_raw(const std::string& text) { return compile(text); }

}  // namespace xc::lib
