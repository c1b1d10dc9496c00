//! Exhaustive invariant checks at small rank, one named result per claim.

use serde::Serialize;

use crate::element::{idempotent, reduce, Element};
use crate::enumerate::{enumerate, ElementList, DEFAULT_ELEMENT_CAP};
use crate::error::Result;
use crate::level::{
    annihilation_depth, ball, distance, level_by_definition, level_by_recursion, level_sets, r_set,
    r_set_by_structure, sphere, upper_idempotent,
};
use crate::morphism::{
    apply_endomorphism, delete, delete_prefix, deletion_matrix, dn_member, dn_product, word_delete,
    BoolMatrix,
};
use crate::oracle::congruence_oracle;
use crate::stochastic::{
    eventual_value, exact_hitting_pmf, partial_products, transition_matrix, ProbabilityVector,
    SequenceSpec,
};
use crate::word::{all_words, Generator, IndexSet, Word};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub claim: String,
    pub cases: u64,
    pub passed: bool,
    /// First few counterexamples, if any.
    pub failures: Vec<String>,
}

const MAX_REPORTED: usize = 3;

struct Tally {
    cases: u64,
    failures: Vec<String>,
    failed: u64,
}

impl Tally {
    fn new() -> Self {
        Tally {
            cases: 0,
            failures: Vec::new(),
            failed: 0,
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_REPORTED {
                self.failures.push(describe());
            }
        }
    }
}

struct Universe {
    rank: usize,
    list: ElementList,
    sets: Vec<IndexSet>,
    gens: Vec<Generator>,
}

impl Universe {
    fn new(rank: usize) -> Result<Self> {
        Ok(Universe {
            rank,
            list: enumerate(rank, DEFAULT_ELEMENT_CAP)?,
            sets: IndexSet::all(rank)?.collect(),
            gens: (1..=rank)
                .map(|i| Generator::new(rank, i))
                .collect::<Result<_>>()?,
        })
    }

    fn elements(&self) -> &[Element] {
        self.list.elements()
    }
}

fn el(x: &Element) -> String {
    format!("[{x}]")
}

type Check = (
    &'static str,
    &'static str,
    fn(&[Universe], &mut Tally) -> Result<()>,
);

const CHECKS: &[Check] = &[
    ("word-problem", "reduce(u) = reduce(v) iff u, v are congruent (all words of length <= 6)", word_problem),
    ("enumeration", "BFS element count equals the number of congruence classes", enumeration_count),
    ("canonical-words", "equal letters in a canonical word are separated by a smaller and a larger letter", canonical_words),
    ("zero", "f x = x f = f", zero_element),
    ("idempotents", "e_X e_X = e_X, distinct for distinct X, and these are all idempotents", idempotents),
    ("power", "x^k = e_c(x) for k >= |c(x)|", powers),
    ("content", "c(xy) = c(x) ∪ c(y)", content_hom),
    ("tau", "τ(xy) = τ(y)τ(x) and τ(τ(x)) = x", tau_anti),
    ("dn-closure", "D_n is closed under Boolean product", dn_closure),
    ("dn-homomorphism", "ψ(xy) = ψ(x)ψ(y) for every ψ given by a D_n matrix", dn_homomorphism),
    ("deletion-words", "∂̄_X(φ(w)) = φ(∂_X(w)) (all words of length <= 6)", deletion_words),
    ("deletion-matrix", "deleting letters equals applying I_{X^c}", deletion_matrix_agrees),
    ("deletion-idempotent", "∂̄_X(e_Y) = e_{Y∖X}", deletion_idempotent),
    ("deletion-union", "∂̄_{X∪Y} = ∂̄_X ∂̄_Y = ∂̄_Y ∂̄_X", deletion_union),
    ("deletion-upward", "∂̄_[m](x) = e_{[n]∖[m]} implies ∂̄_[m+r](x) = e_{[n]∖[m+r]}", deletion_upward),
    ("deletion-chain", "∂̄_[m-1](x) a_m = ∂̄_[m](x) a_m", deletion_chain),
    ("deletion-absorb", "x e_[i] = ∂̄_[j](x) e_[i] for j <= i", deletion_absorb),
    ("deletion-step", "∂̄_[m](x) = e_{[n]∖[m]} implies ∂̄_[m-1](x a_m) = e_{[n]∖[m-1]}", deletion_step),
    ("deletion-cancel", "∂̄_[m](x a_{m+k}) or ∂̄_[m](a_{m+r} x) = e_{[n]∖[m]} implies ∂̄_[m](x) = e_{[n]∖[m]}", deletion_cancel),
    ("zero-propagation", "x a_k = f (k >= 2) or a_r x = f (r <= n-1) implies x = f", zero_propagation),
    ("r-set", "{x : x a_1 = f} = {e_{2..n}} ∪ {x a_1 e_{2..m(x)} : x ∈ ⟨a_2..a_n⟩}, size 1 + |K_{n-1}|", r_set_structure),
    ("level-zero", "L(x) = 0 iff x = f", level_zero),
    ("level-upward", "∂̄_[k](x) = e_{[n]∖[k]} for every k >= L(x)", level_upward),
    ("level-n", "L(x) = n iff c(x) ⊆ [n-1]", level_n),
    ("level-product", "L(xy) <= min(L(x), L(y))", level_product),
    ("level-right", "L(x a_i) = L(x) - 1 if i = L(x), else L(x)", level_right),
    ("level-left", "L(y x) = L(x) whenever c(y) ⊆ [n-1]", level_left),
    ("level-left-top", "L(a_n e_{[n-1]∖[j]}) = j for 0 <= j <= n-1", level_left_top),
    ("level-recursion", "folding g over any word gives L (all words of length <= 6)", level_recursion),
    ("level-m", "L = m, where m(x) = min{i : x e_[i] = f}", level_m),
    ("level-sets", "A_x = B_x, both upward closed from L(x)", level_sets_equal),
    ("ultrametric", "d(x,y) = 0 iff x = y, d symmetric, d(x,y) <= max(d(x,z), d(z,y))", ultrametric),
    ("distance-to-zero", "d(x, f) = L(x)", distance_to_zero),
    ("ball", "B(f, 1) = {x : x a_1 = f}", ball_is_r),
    ("sphere", "S(f, n) = {x : c(x) ⊆ [n-1]}, size |K_{n-1}|", sphere_top),
    ("stabilization", "periodic partial products stabilize at e_M when every letter recurs; cycles covering [n] give f", stabilization),
    ("chain", "P(T <= k) from the level chain equals the convolution of geometric laws", chain_agreement),
    ("hitting-mean", "E[T] = Σ 1/p_i, equal to n^2 when uniform", hitting_mean),
];

/// Runs every check on ranks `2..=max_rank`.
pub fn run(max_rank: usize) -> Result<Vec<CheckResult>> {
    let universes: Vec<Universe> = (2..=max_rank.max(2))
        .map(Universe::new)
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(CHECKS.len());
    for (name, claim, f) in CHECKS {
        let mut tally = Tally::new();
        f(&universes, &mut tally)?;
        out.push(CheckResult {
            name: name.to_string(),
            claim: claim.to_string(),
            cases: tally.cases,
            passed: tally.failed == 0,
            failures: tally.failures,
        });
    }
    Ok(out)
}

fn word_problem(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us.iter().filter(|u| u.rank <= 3) {
        let oracle = congruence_oracle(u.rank, 6, 2)?;
        let words: Vec<Word> = all_words(u.rank, 6).collect();
        let reduced: Vec<Element> = words.iter().map(reduce).collect();
        let labels = oracle.labels();
        // each oracle class maps to a single element and vice versa
        let mut by_label = std::collections::HashMap::new();
        let mut by_element = std::collections::HashMap::new();
        for (i, w) in words.iter().enumerate() {
            let a = by_label
                .entry(labels[i])
                .or_insert_with(|| reduced[i].clone());
            let ok_a = *a == reduced[i];
            let b = by_element.entry(reduced[i].clone()).or_insert(labels[i]);
            let ok_b = *b == labels[i];
            t.check(ok_a && ok_b, || format!("rank {} word [{w}]", u.rank));
        }
    }
    Ok(())
}

fn enumeration_count(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us.iter().filter(|u| u.rank <= 3) {
        let classes = congruence_oracle(u.rank, 8, 2)?.num_classes();
        t.check(u.list.is_complete() && u.list.len() == classes, || {
            format!(
                "rank {}: {} elements vs {classes} classes",
                u.rank,
                u.list.len()
            )
        });
    }
    Ok(())
}

fn canonical_words(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us {
        for x in u.elements() {
            let c = x.canonical();
            let mut ok = true;
            for a in 0..c.len() {
                if let Some(b) = (a + 1..c.len()).find(|&b| c[b] == c[a]) {
                    let gap = &c[a + 1..b];
                    ok &= gap.iter().any(|&g| g < c[a]) && gap.iter().any(|&g| g > c[a]);
                }
            }
            t.check(ok, || el(x));
        }
    }
    Ok(())
}

fn zero_element(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us {
        let f = Element::zero(u.rank)?;
        for x in u.elements() {
            t.check(
                f.multiply(x)?.is_zero() && x.multiply(&f)?.is_zero(),
                || el(x),
            );
        }
    }
    Ok(())
}

fn idempotents(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us {
        let mut es = Vec::new();
        for s in &u.sets {
            let e = idempotent(s)?;
            t.check(e.multiply(&e)? == e, || format!("e_{s}"));
            es.push(e);
        }
        let mut sorted = es.clone();
        sorted.sort();
        sorted.dedup();
        t.check(sorted.len() == es.len(), || {
            format!("rank {}: repeated e_X", u.rank)
        });
        for x in u.elements().iter().filter(|x| x.is_idempotent()) {
            t.check(sorted.binary_search(x).is_ok(), || el(x));
        }
    }
    Ok(())
}

fn powers(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us {
        for x in u.elements() {
            let c = x.content();
            let target = idempotent(&c)?;
            for k in c.len().max(1)..=u.rank + 1 {
                t.check(x.power(k as u64)? == target, || format!("{} ^ {k}", el(x)));
            }
        }
    }
    Ok(())
}

fn content_hom(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us.iter().filter(|u| u.rank <= 3) {
        for x in u.elements() {
            for y in u.elements() {
                let ok = x.multiply(y)?.content() == x.content().union(&y.content());
                t.check(ok, || format!("{} {}", el(x), el(y)));
            }
        }
    }
    Ok(())
}

fn tau_anti(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us.iter().filter(|u| u.rank <= 3) {
        for x in u.elements() {
            t.check(x.tau().tau() == *x, || el(x));
            for y in u.elements() {
                let ok = x.multiply(y)?.tau() == y.tau().multiply(&x.tau())?;
                t.check(ok, || format!("{} {}", el(x), el(y)));
            }
        }
    }
    Ok(())
}

fn all_matrices(n: usize) -> Result<Vec<BoolMatrix>> {
    let cells = n * n;
    (0u64..1 << cells)
        .map(|bits| {
            let rows: Vec<Vec<bool>> = (0..n)
                .map(|r| (0..n).map(|c| bits >> (r * n + c) & 1 == 1).collect())
                .collect();
            BoolMatrix::from_rows(&rows)
        })
        .collect()
}

fn dn_closure(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us.iter().filter(|u| u.rank <= 3) {
        let members: Vec<BoolMatrix> = all_matrices(u.rank)?
            .into_iter()
            .filter(dn_member)
            .collect();
        for a in &members {
            for b in &members {
                t.check(dn_member(&dn_product(a, b)?), || format!("{a}*\n{b}"));
            }
        }
    }
    Ok(())
}

fn dn_homomorphism(us: &[Universe], t: &mut Tally) -> Result<()> {
    let u = &us[0];
    for m in all_matrices(u.rank)?.into_iter().filter(dn_member) {
        for x in u.elements() {
            for y in u.elements() {
                let lhs = apply_endomorphism(&m, &x.multiply(y)?)?;
                let rhs = apply_endomorphism(&m, x)?.multiply(&apply_endomorphism(&m, y)?)?;
                t.check(lhs == rhs, || format!("{m}{} {}", el(x), el(y)));
            }
        }
    }
    Ok(())
}

fn deletion_words(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us.iter().filter(|u| u.rank <= 3) {
        for w in all_words(u.rank, 6) {
            let x = reduce(&w);
            for s in &u.sets {
                t.check(reduce(&word_delete(s, &w)) == delete(s, &x)?, || {
                    format!("X={s} w=[{w}]")
                });
            }
        }
    }
    Ok(())
}

fn deletion_matrix_agrees(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us {
        for s in &u.sets {
            let psi = deletion_matrix(s);
            for x in u.elements() {
                t.check(psi.apply(x)? == delete(s, x)?, || {
                    format!("X={s} {}", el(x))
                });
            }
        }
    }
    Ok(())
}

fn deletion_idempotent(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us {
        for x in &u.sets {
            for y in &u.sets {
                let ok = delete(x, &idempotent(y)?)? == idempotent(&y.difference(x))?;
                t.check(ok, || format!("X={x} Y={y}"));
            }
        }
    }
    Ok(())
}

fn deletion_union(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us {
        for x in u.elements() {
            for a in &u.sets {
                for b in &u.sets {
                    let ab = delete(a, &delete(b, x)?)?;
                    let ba = delete(b, &delete(a, x)?)?;
                    let union = delete(&a.union(b), x)?;
                    t.check(ab == union && ba == union, || {
                        format!("X={a} Y={b} {}", el(x))
                    });
                }
            }
        }
    }
    Ok(())
}

fn is_upper(x: &Element, m: usize) -> bool {
    delete_prefix(m, x) == upper_idempotent(x.rank(), m).expect("valid depth")
}

fn deletion_upward(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us {
        let n = u.rank;
        for x in u.elements() {
            for m in 0..=n {
                if is_upper(x, m) {
                    for k in m..=n {
                        t.check(is_upper(x, k), || format!("{} m={m} k={k}", el(x)));
                    }
                }
            }
        }
    }
    Ok(())
}

fn deletion_chain(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us {
        for x in u.elements() {
            for g in &u.gens {
                let m = g.index();
                let ok = delete_prefix(m - 1, x).mul_gen(*g) == delete_prefix(m, x).mul_gen(*g);
                t.check(ok, || format!("{} m={m}", el(x)));
            }
        }
    }
    Ok(())
}

fn deletion_absorb(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us {
        let n = u.rank;
        for x in u.elements() {
            for i in 0..=n {
                let e = idempotent(&IndexSet::prefix(n, i)?)?;
                let lhs = x.multiply(&e)?;
                for j in 0..=i {
                    t.check(delete_prefix(j, x).multiply(&e)? == lhs, || {
                        format!("{} i={i} j={j}", el(x))
                    });
                }
            }
        }
    }
    Ok(())
}

fn deletion_step(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us {
        for x in u.elements() {
            for g in &u.gens {
                let m = g.index();
                if is_upper(x, m) {
                    t.check(is_upper(&x.mul_gen(*g), m - 1), || {
                        format!("{} m={m}", el(x))
                    });
                }
            }
        }
    }
    Ok(())
}

fn deletion_cancel(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us {
        let n = u.rank;
        for x in u.elements() {
            for m in 0..=n.saturating_sub(2) {
                let hyp_right = (2..=n - m).any(|k| is_upper(&x.mul_gen(u.gens[m + k - 1]), m));
                let hyp_left = (1..n - m).any(|r| is_upper(&x.gen_mul(u.gens[m + r - 1]), m));
                if hyp_right || hyp_left {
                    t.check(is_upper(x, m), || format!("{} m={m}", el(x)));
                }
            }
        }
    }
    Ok(())
}

fn zero_propagation(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us {
        let n = u.rank;
        for x in u.elements() {
            for g in &u.gens {
                let i = g.index();
                if i >= 2 && x.mul_gen(*g).is_zero() {
                    t.check(x.is_zero(), || format!("{} a_{i}", el(x)));
                }
                if i < n && x.gen_mul(*g).is_zero() {
                    t.check(x.is_zero(), || format!("a_{i} {}", el(x)));
                }
            }
        }
    }
    Ok(())
}

/// `|K_{n-1}|`; `K_1 = {e, a_1}` lies below the supported rank range.
fn previous_size(n: usize) -> Result<usize> {
    if n == 2 {
        Ok(2)
    } else {
        Ok(enumerate(n - 1, DEFAULT_ELEMENT_CAP)?.len())
    }
}

fn r_set_structure(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us {
        let r = r_set(&u.list)?;
        t.check(r == r_set_by_structure(&u.list)?, || {
            format!("rank {}", u.rank)
        });
        let smaller = previous_size(u.rank)?;
        t.check(r.len() == 1 + smaller, || {
            format!("rank {}: |R| = {}, |K_(n-1)| = {smaller}", u.rank, r.len())
        });
    }
    Ok(())
}

fn level_zero(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us {
        for x in u.elements() {
            t.check((level_by_definition(x) == 0) == x.is_zero(), || el(x));
        }
    }
    Ok(())
}

fn level_upward(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us {
        for x in u.elements() {
            let l = level_by_definition(x);
            for k in l..=u.rank {
                t.check(is_upper(x, k), || format!("{} k={k}", el(x)));
            }
        }
    }
    Ok(())
}

fn level_n(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us {
        let lower = IndexSet::prefix(u.rank, u.rank - 1)?;
        for x in u.elements() {
            let ok = (level_by_definition(x) == u.rank) == x.content().is_subset(&lower);
            t.check(ok, || el(x));
        }
    }
    Ok(())
}

fn level_product(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us.iter().filter(|u| u.rank <= 3) {
        let levels: Vec<usize> = u.elements().iter().map(level_by_definition).collect();
        for (x, lx) in u.elements().iter().zip(&levels) {
            for (y, ly) in u.elements().iter().zip(&levels) {
                let ok = level_by_definition(&x.multiply(y)?) <= *lx.min(ly);
                t.check(ok, || format!("{} {}", el(x), el(y)));
            }
        }
    }
    Ok(())
}

fn level_right(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us {
        for x in u.elements() {
            let l = level_by_definition(x);
            for g in &u.gens {
                let expected = if g.index() == l { l - 1 } else { l };
                t.check(level_by_definition(&x.mul_gen(*g)) == expected, || {
                    format!("{} a_{}", el(x), g.index())
                });
            }
        }
    }
    Ok(())
}

fn level_left(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us.iter().filter(|u| u.rank <= 3) {
        let lower = IndexSet::prefix(u.rank, u.rank - 1)?;
        let ys: Vec<&Element> = u
            .elements()
            .iter()
            .filter(|y| y.content().is_subset(&lower))
            .collect();
        for x in u.elements() {
            let l = level_by_definition(x);
            for y in &ys {
                t.check(level_by_definition(&y.multiply(x)?) == l, || {
                    format!("{} {}", el(y), el(x))
                });
            }
        }
    }
    Ok(())
}

fn level_left_top(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us {
        let n = u.rank;
        let top = u.gens[n - 1];
        for j in 0..n {
            let e = idempotent(&IndexSet::prefix(n, n - 1)?.difference(&IndexSet::prefix(n, j)?))?;
            t.check(level_by_definition(&e.gen_mul(top)) == j, || {
                format!("j={j}")
            });
        }
    }
    Ok(())
}

fn level_recursion(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us.iter().filter(|u| u.rank <= 3) {
        for w in all_words(u.rank, 6) {
            t.check(
                level_by_recursion(&w) == level_by_definition(&reduce(&w)),
                || format!("[{w}]"),
            );
        }
    }
    Ok(())
}

fn level_m(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us {
        for x in u.elements() {
            let l = level_by_definition(x);
            let ok = annihilation_depth(x) == l && level_by_recursion(&x.word()) == l;
            t.check(ok, || el(x));
        }
    }
    Ok(())
}

fn level_sets_equal(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us {
        for x in u.elements() {
            let s = level_sets(x);
            let ok = s.by_deletion == s.by_annihilation
                && s.by_deletion.is_upward_closed()
                && s.by_deletion.min() == Some(level_by_definition(x));
            t.check(ok, || el(x));
        }
    }
    Ok(())
}

fn ultrametric(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us.iter().filter(|u| u.rank <= 3) {
        let xs = u.elements();
        let k = xs.len();
        let mut d = vec![0usize; k * k];
        for a in 0..k {
            for b in 0..k {
                d[a * k + b] = distance(&xs[a], &xs[b])?;
            }
        }
        for a in 0..k {
            for b in 0..k {
                let dab = d[a * k + b];
                t.check((dab == 0) == (a == b) && dab == d[b * k + a], || {
                    format!("{} {}", el(&xs[a]), el(&xs[b]))
                });
                if u.rank == 2 || a % 3 == 0 {
                    for c in 0..k {
                        t.check(dab <= d[a * k + c].max(d[c * k + b]), || {
                            format!("{} {} {}", el(&xs[a]), el(&xs[b]), el(&xs[c]))
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

fn distance_to_zero(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us {
        let f = Element::zero(u.rank)?;
        for x in u.elements() {
            t.check(distance(x, &f)? == level_by_definition(x), || el(x));
        }
    }
    Ok(())
}

fn ball_is_r(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us {
        let f = Element::zero(u.rank)?;
        t.check(ball(&f, 1, &u.list)? == r_set(&u.list)?, || {
            format!("rank {}", u.rank)
        });
    }
    Ok(())
}

fn sphere_top(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us {
        let f = Element::zero(u.rank)?;
        let lower = IndexSet::prefix(u.rank, u.rank - 1)?;
        let s = sphere(&f, u.rank, &u.list)?;
        let expected: Vec<Element> = u
            .elements()
            .iter()
            .filter(|x| x.content().is_subset(&lower))
            .cloned()
            .collect();
        t.check(s == expected, || format!("rank {}", u.rank));
        let smaller = previous_size(u.rank)?;
        t.check(s.len() == smaller, || {
            format!("rank {}: |S| = {}", u.rank, s.len())
        });
    }
    Ok(())
}

fn stabilization(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us.iter().filter(|u| u.rank <= 3) {
        for cycle in all_words(u.rank, 4).filter(|w| !w.is_empty()) {
            for preamble in all_words(u.rank, 2) {
                let seq = SequenceSpec::periodic(preamble.clone(), cycle.clone())?;
                let trace = partial_products(&seq, 1000)?;
                let Some(value) = trace.eventual() else {
                    t.check(false, || format!("[{preamble}] ([{cycle}])* not stable"));
                    continue;
                };
                if seq.occurring() == seq.recurring().expect("periodic") {
                    t.check(*value == eventual_value(&seq)?, || {
                        format!("[{preamble}] ([{cycle}])*")
                    });
                }
                if seq.recurring().expect("periodic").len() == u.rank {
                    t.check(value.is_zero(), || format!("[{preamble}] ([{cycle}])*"));
                }
            }
        }
    }
    Ok(())
}

fn probability_fixtures(n: usize) -> Result<Vec<ProbabilityVector>> {
    let mut out = vec![ProbabilityVector::uniform(n)?];
    let weights: Vec<f64> = (1..=n).map(|i| i as f64).collect();
    let total: f64 = weights.iter().sum();
    out.push(ProbabilityVector::new(
        weights.iter().map(|w| w / total).collect(),
    )?);
    out.push(ProbabilityVector::new(
        weights.iter().rev().map(|w| w / total).collect(),
    )?);
    Ok(out)
}

fn chain_agreement(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us {
        for p in probability_fixtures(u.rank)? {
            let pmf = exact_hitting_pmf(&p, None)?;
            let by_chain = transition_matrix(&p).absorption_cdf(pmf.k_max());
            for (k, (a, b)) in pmf.cdf().iter().zip(&by_chain).enumerate() {
                t.check((a - b).abs() <= 1e-12, || {
                    format!("p={:?} k={k}", p.as_slice())
                });
            }
        }
    }
    Ok(())
}

fn hitting_mean(us: &[Universe], t: &mut Tally) -> Result<()> {
    for u in us {
        for p in probability_fixtures(u.rank)? {
            let pmf = exact_hitting_pmf(&p, None)?;
            let target = p.expected_hitting_time();
            t.check(
                (pmf.mean_with_tail_correction() - target).abs() <= 1e-9,
                || format!("p={:?}", p.as_slice()),
            );
        }
        let n = u.rank as f64;
        let uniform = ProbabilityVector::uniform(u.rank)?.expected_hitting_time();
        t.check((uniform - n * n).abs() <= 1e-9, || {
            format!("rank {}", u.rank)
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass_at_rank_three() {
        let results = run(3).unwrap();
        assert_eq!(results.len(), CHECKS.len());
        for r in &results {
            assert!(r.passed, "{} failed: {:?}", r.name, r.failures);
            assert!(r.cases > 0, "{} ran no cases", r.name);
        }
    }

    #[test]
    fn names_are_unique() {
        let mut names: Vec<&str> = CHECKS.iter().map(|c| c.0).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), CHECKS.len());
    }
}
