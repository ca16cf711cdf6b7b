//! Enumeration of integer solutions of a system of forms in a box `[-B, B]^n`.
//!
//! Two engines. The general one assigns variables one at a time; whenever an
//! equation is left with a single unknown in which it has degree at most two
//! (or is a pure power), that unknown is solved for instead of looped over.
//! For a single form in four variables that splits as `g(x_i, x_j) = h(x_k, x_l)`
//! a meet-in-the-middle join on sorted value tables is used instead.
//!
//! Both report every nonzero solution exactly once, in a deterministic order
//! that does not depend on the number of worker threads.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_integer::Roots;
use rayon::prelude::*;

use super::form::HomogeneousForm;
use super::SurfaceError;

pub(crate) const MAXV: usize = 8;

/// Shared step counter; enumeration stops once `limit` steps have been taken.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: AtomicU64,
    exceeded: AtomicBool,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget {
            limit,
            used: AtomicU64::new(0),
            exceeded: AtomicBool::new(false),
        }
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    fn charge(&self, steps: u64) -> bool {
        let total = self.used.fetch_add(steps, Ordering::Relaxed) + steps;
        if total > self.limit {
            self.exceeded.store(true, Ordering::Relaxed);
        }
        !self.exceeded.load(Ordering::Relaxed)
    }

    fn check(&self, steps: u64) -> Result<(), SurfaceError> {
        if self.charge(steps) {
            Ok(())
        } else {
            Err(SurfaceError::BudgetExceeded { limit: self.limit })
        }
    }
}

#[derive(Clone)]
struct Term {
    c: i128,
    e: [u8; MAXV],
}

#[derive(Clone)]
struct Equation {
    terms: Vec<Term>,
    mask: u32,
}

impl Equation {
    fn eval(&self, x: &[i64; MAXV]) -> i128 {
        let mut acc = 0i128;
        for t in &self.terms {
            let mut v = t.c;
            for (j, &k) in t.e.iter().enumerate() {
                for _ in 0..k {
                    v *= x[j] as i128;
                }
            }
            acc += v;
        }
        acc
    }

    /// Coefficients of the equation as a polynomial in `x_v`, the other
    /// variables taking their assigned values.
    fn univariate(&self, x: &[i64; MAXV], v: usize) -> [i128; 5] {
        let mut c = [0i128; 5];
        for t in &self.terms {
            let mut val = t.c;
            for (j, &k) in t.e.iter().enumerate() {
                if j != v {
                    for _ in 0..k {
                        val *= x[j] as i128;
                    }
                }
            }
            c[t.e[v] as usize] += val;
        }
        c
    }
}

/// A system of forms compiled for fast evaluation.
#[derive(Clone)]
pub struct System {
    nvars: usize,
    eqs: Vec<Equation>,
    order: Vec<usize>,
}

enum Step {
    Contradiction,
    Solve(usize, Vec<i64>),
    Branch(usize),
    Done,
}

impl System {
    pub fn new(forms: &[HomogeneousForm]) -> Result<Self, SurfaceError> {
        let nvars = forms.first().ok_or(SurfaceError::ZeroForm)?.nvars();
        if nvars > MAXV {
            return Err(SurfaceError::TooManyVariables(nvars));
        }
        if forms.iter().any(|f| f.nvars() != nvars) {
            return Err(SurfaceError::Parse(
                "forms in different numbers of variables".into(),
            ));
        }
        let mut eqs = Vec::new();
        for f in forms {
            if f.degree() > 4 {
                return Err(SurfaceError::Parse(
                    "degree above 4 is not supported".into(),
                ));
            }
            let mut mask = 0u32;
            let terms = f
                .terms()
                .iter()
                .map(|(c, e)| {
                    let mut ee = [0u8; MAXV];
                    for (i, &k) in e.iter().enumerate() {
                        ee[i] = k as u8;
                        if k > 0 {
                            mask |= 1 << i;
                        }
                    }
                    Term {
                        c: *c as i128,
                        e: ee,
                    }
                })
                .collect();
            eqs.push(Equation { terms, mask });
        }
        // Branch first on the variables that occur in the most equations.
        let mut order: Vec<usize> = (0..nvars).collect();
        order.sort_by_key(|&v| {
            std::cmp::Reverse(eqs.iter().filter(|e| e.mask >> v & 1 == 1).count())
        });
        Ok(System { nvars, eqs, order })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    fn full(&self) -> u32 {
        (1u32 << self.nvars) - 1
    }

    fn next_step(&self, x: &[i64; MAXV], assigned: u32, bound: i64) -> Step {
        if assigned == self.full() {
            return Step::Done;
        }
        let mut best: Option<(usize, usize, Vec<i64>)> = None;
        for eq in &self.eqs {
            let un = eq.mask & !assigned;
            if un.count_ones() != 1 {
                continue;
            }
            let v = un.trailing_zeros() as usize;
            let c = eq.univariate(x, v);
            let deg = match (0..5).rev().find(|&k| c[k] != 0) {
                None => continue,
                Some(0) => return Step::Contradiction,
                Some(d) => d,
            };
            if let Some(roots) = integer_roots(&c, deg, bound) {
                if roots.is_empty() {
                    return Step::Contradiction;
                }
                if best
                    .as_ref()
                    .is_none_or(|(_, d, r)| (deg, roots.len()) < (*d, r.len()))
                {
                    best = Some((v, deg, roots));
                }
            }
        }
        if let Some((v, _, roots)) = best {
            return Step::Solve(v, roots);
        }
        let v = *self
            .order
            .iter()
            .find(|&&v| assigned >> v & 1 == 0)
            .expect("an unassigned variable remains");
        Step::Branch(v)
    }

    /// After assigning `v`, every equation that became fully determined must vanish.
    fn consistent(&self, x: &[i64; MAXV], assigned: u32, v: usize) -> bool {
        self.eqs
            .iter()
            .all(|eq| eq.mask >> v & 1 == 0 || eq.mask & !assigned != 0 || eq.eval(x) == 0)
    }

    fn search<F: FnMut(&[i64])>(
        &self,
        x: &mut [i64; MAXV],
        assigned: u32,
        bound: i64,
        nodes: &mut u64,
        budget: &Budget,
        visit: &mut F,
    ) -> Result<(), SurfaceError> {
        *nodes += 1;
        if *nodes >= 1 << 14 {
            budget.check(*nodes)?;
            *nodes = 0;
        }
        match self.next_step(x, assigned, bound) {
            Step::Done => {
                if x[..self.nvars].iter().any(|&c| c != 0) {
                    visit(&x[..self.nvars]);
                }
                Ok(())
            }
            Step::Contradiction => Ok(()),
            Step::Solve(v, roots) => {
                for r in roots {
                    x[v] = r;
                    let a = assigned | 1 << v;
                    if self.consistent(x, a, v) {
                        self.search(x, a, bound, nodes, budget, visit)?;
                    }
                }
                x[v] = 0;
                Ok(())
            }
            Step::Branch(v) => {
                for r in -bound..=bound {
                    x[v] = r;
                    let a = assigned | 1 << v;
                    if self.consistent(x, a, v) {
                        self.search(x, a, bound, nodes, budget, visit)?;
                    }
                }
                x[v] = 0;
                Ok(())
            }
        }
    }

    /// Fold over all nonzero solutions in `[-bound, bound]^n`, in parallel over
    /// the first branching variable. Partial results are merged in value order.
    pub fn fold<A, V, M>(
        &self,
        bound: i64,
        budget: &Budget,
        init: impl Fn() -> A + Sync + Send,
        visit: V,
        merge: M,
    ) -> Result<A, SurfaceError>
    where
        A: Send,
        V: Fn(&mut A, &[i64]) + Sync + Send,
        M: Fn(A, A) -> A + Sync + Send,
    {
        let mut x = [0i64; MAXV];
        match self.next_step(&x, 0, bound) {
            Step::Branch(v) => {
                let parts: Vec<Result<A, SurfaceError>> = (-bound..=bound)
                    .into_par_iter()
                    .map(|r| {
                        let mut x = [0i64; MAXV];
                        x[v] = r;
                        let mut acc = init();
                        let mut nodes = 0u64;
                        if self.consistent(&x, 1 << v, v) {
                            self.search(&mut x, 1 << v, bound, &mut nodes, budget, &mut |p| {
                                visit(&mut acc, p)
                            })?;
                        }
                        budget.check(nodes)?;
                        Ok(acc)
                    })
                    .collect();
                let mut acc = init();
                for p in parts {
                    acc = merge(acc, p?);
                }
                Ok(acc)
            }
            _ => {
                let mut acc = init();
                let mut nodes = 0u64;
                self.search(&mut x, 0, bound, &mut nodes, budget, &mut |p| {
                    visit(&mut acc, p)
                })?;
                budget.check(nodes)?;
                Ok(acc)
            }
        }
    }
}

/// Integer roots in `[-bound, bound]` of `sum c_k t^k` (degree `deg >= 1`), when
/// the polynomial is of a shape that can be solved directly.
fn integer_roots(c: &[i128; 5], deg: usize, bound: i64) -> Option<Vec<i64>> {
    let b = bound as i128;
    let keep = |t: i128| (-b..=b).contains(&t);
    match deg {
        1 => {
            let (c0, c1) = (c[0], c[1]);
            Some(if c0 % c1 == 0 && keep(-c0 / c1) {
                vec![(-c0 / c1) as i64]
            } else {
                vec![]
            })
        }
        2 => {
            let (c0, c1, c2) = (c[0], c[1], c[2]);
            let disc = c1
                .checked_mul(c1)?
                .checked_sub(c2.checked_mul(c0)?.checked_mul(4)?)?;
            if disc < 0 {
                return Some(vec![]);
            }
            let r = disc.sqrt();
            if r * r != disc {
                return Some(vec![]);
            }
            let mut out = Vec::new();
            for num in [-c1 - r, -c1 + r] {
                let den = 2 * c2;
                if num % den == 0 && keep(num / den) && !out.contains(&((num / den) as i64)) {
                    out.push((num / den) as i64);
                }
            }
            out.sort_unstable();
            Some(out)
        }
        _ if (1..deg).all(|k| c[k] == 0) => {
            // c_d t^d + c_0 = 0
            let (c0, cd) = (c[0], c[deg]);
            if c0 % cd != 0 {
                return Some(vec![]);
            }
            let target = -c0 / cd;
            let mut out = Vec::new();
            if deg % 2 == 1 {
                let r = target.abs().nth_root(deg as u32) * target.signum();
                if r.pow(deg as u32) == target && keep(r) {
                    out.push(r as i64);
                }
            } else if target >= 0 {
                let r = target.nth_root(deg as u32);
                if r.pow(deg as u32) == target && keep(r) {
                    out.push(-r as i64);
                    if r != 0 {
                        out.push(r as i64);
                    }
                }
            }
            out.sort_unstable();
            Some(out)
        }
        _ => None,
    }
}

/// A four-variable form that splits as `g(x_i, x_j) + h(x_k, x_l)`.
pub(crate) struct Split {
    form: HomogeneousForm,
    left: [usize; 2],
    right: [usize; 2],
}

impl Split {
    pub fn detect(forms: &[HomogeneousForm]) -> Option<Split> {
        let [f] = forms else { return None };
        if f.nvars() != 4 {
            return None;
        }
        for (left, right) in [([0, 1], [2, 3]), ([0, 2], [1, 3]), ([0, 3], [1, 2])] {
            let ok = f.terms().iter().all(|(_, e)| {
                let l = left.iter().any(|&i| e[i] > 0);
                let r = right.iter().any(|&i| e[i] > 0);
                !(l && r)
            });
            if ok {
                return Some(Split {
                    form: f.clone(),
                    left,
                    right,
                });
            }
        }
        None
    }

    /// Is `|value| < 2^62` guaranteed on the box?
    pub fn fits(&self, bound: i64) -> bool {
        let mut total = 0f64;
        for (c, _) in self.form.terms() {
            total += (*c as f64).abs() * (bound as f64).powi(self.form.degree() as i32);
        }
        total < 4.0e18
    }

    fn half(&self, vars: [usize; 2], a: i64, b: i64) -> i64 {
        let mut x = [0i64; 4];
        x[vars[0]] = a;
        x[vars[1]] = b;
        self.form.eval_i128(&x) as i64
    }

    pub fn fold<A, V, M>(
        &self,
        bound: i64,
        budget: &Budget,
        init: impl Fn() -> A + Sync + Send,
        visit: V,
        merge: M,
    ) -> Result<A, SurfaceError>
    where
        A: Send,
        V: Fn(&mut A, &[i64]) + Sync + Send,
        M: Fn(A, A) -> A + Sync + Send,
    {
        let side = (2 * bound + 1) as u64;
        budget.check(2 * side * side)?;
        let mut table: Vec<(i64, i32, i32)> = (-bound..=bound)
            .into_par_iter()
            .flat_map_iter(|a| {
                (-bound..=bound).map(move |b| (self.half(self.left, a, b), a as i32, b as i32))
            })
            .collect();
        table.par_sort_unstable();
        let parts: Vec<A> = (-bound..=bound)
            .into_par_iter()
            .map(|c| {
                let mut acc = init();
                let mut x = [0i64; 4];
                for d in -bound..=bound {
                    let target = -self.half(self.right, c, d);
                    let lo = table.partition_point(|e| e.0 < target);
                    for e in table[lo..].iter().take_while(|e| e.0 == target) {
                        x[self.left[0]] = e.1 as i64;
                        x[self.left[1]] = e.2 as i64;
                        x[self.right[0]] = c;
                        x[self.right[1]] = d;
                        if x.iter().any(|&v| v != 0) {
                            visit(&mut acc, &x);
                        }
                    }
                }
                acc
            })
            .collect();
        let mut acc = init();
        for p in parts {
            acc = merge(acc, p);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(forms: &[HomogeneousForm], b: i64) -> Vec<Vec<i64>> {
        let n = forms[0].nvars();
        let side = 2 * b + 1;
        let mut out = Vec::new();
        for idx in 0..side.pow(n as u32) {
            let mut r = idx;
            let mut x = Vec::new();
            for _ in 0..n {
                x.push(r % side - b);
                r /= side;
            }
            if x.iter().any(|&c| c != 0) && forms.iter().all(|f| f.eval_i128(&x) == 0) {
                out.push(x);
            }
        }
        out.sort();
        out
    }

    fn collect(forms: &[HomogeneousForm], b: i64) -> Vec<Vec<i64>> {
        let sys = System::new(forms).unwrap();
        let budget = Budget::new(u64::MAX);
        let mut pts = sys
            .fold(
                b,
                &budget,
                Vec::new,
                |acc: &mut Vec<Vec<i64>>, p| acc.push(p.to_vec()),
                |mut a, b| {
                    a.extend(b);
                    a
                },
            )
            .unwrap();
        pts.sort();
        pts
    }

    #[test]
    fn propagation_matches_brute_force() {
        let cases: Vec<Vec<&str>> = vec![
            vec!["x1x2(x1+x2)-x3^2x4"],
            vec!["x1^2x3+x2x3^2+x4^3"],
            vec!["x1*x2-x3^2", "x1*x5+x2*x3+x4^2"],
            vec!["x1x2x3+x1x2x4+x1x3x4+x2x3x4"],
        ];
        for srcs in cases {
            let n = if srcs.len() == 2 { 5 } else { 4 };
            let forms: Vec<_> = srcs
                .iter()
                .map(|s| HomogeneousForm::parse(n, s).unwrap())
                .collect();
            let b = if n == 5 { 3 } else { 5 };
            assert_eq!(collect(&forms, b), brute(&forms, b), "{srcs:?}");
        }
    }

    #[test]
    fn meet_in_the_middle_matches_brute_force() {
        for src in [
            "x1^3+x2^3+x3^3+x4^3",
            "x1^3+2x2^3+x3^3+4x4^3",
            "x1^2-x2^2+x3x4",
        ] {
            let forms = [HomogeneousForm::parse(4, src).unwrap()];
            let split = Split::detect(&forms).unwrap();
            let budget = Budget::new(u64::MAX);
            let mut pts = split
                .fold(
                    6,
                    &budget,
                    Vec::new,
                    |acc: &mut Vec<Vec<i64>>, p| acc.push(p.to_vec()),
                    |mut a, b| {
                        a.extend(b);
                        a
                    },
                )
                .unwrap();
            pts.sort();
            assert_eq!(pts, brute(&forms, 6), "{src}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        let f = HomogeneousForm::parse(4, "x1x2(x1+x2)-x3^2x4").unwrap();
        let sys = System::new(&[f]).unwrap();
        let budget = Budget::new(1000);
        let r = sys.fold(50, &budget, || 0u64, |a, _| *a += 1, |a, b| a + b);
        assert!(matches!(r, Err(SurfaceError::BudgetExceeded { .. })));
    }

    #[test]
    fn roots_of_pure_powers() {
        assert_eq!(integer_roots(&[-27, 0, 0, 1, 0], 3, 10), Some(vec![3]));
        assert_eq!(integer_roots(&[27, 0, 0, 1, 0], 3, 10), Some(vec![-3]));
        assert_eq!(integer_roots(&[-4, 0, 1, 0, 0], 2, 10), Some(vec![-2, 2]));
        assert_eq!(integer_roots(&[1, 0, 1, 0, 0], 2, 10), Some(vec![]));
        assert_eq!(integer_roots(&[1, 1, 0, 1, 0], 3, 10), None);
    }
}
