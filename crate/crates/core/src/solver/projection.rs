//! Euclidean projection onto `{z ∈ [0,1]^n : s_a z_a + s_b z_b ≤ rhs}`.
//!
//! Minimizes `½‖z − t‖² + scale·c·z` over rows that each touch two variables
//! with ±1 coefficients, using the Goldfarb–Idnani dual active-set method:
//! start from the unconstrained minimizer, repeatedly add the most violated
//! constraint and drop active constraints whose multipliers would turn
//! negative. Dual feasibility holds throughout, so the method terminates at
//! the optimum.
//!
//! Equality systems are solved on the constraint graph. Active rows form a
//! forest; on a tree every variable equals `σ_i s + κ_i` for the component's
//! root value `s`, which is either fixed by a pin (an active bound or one
//! odd cycle) or free and chosen by least squares. A set of active
//! constraints is linearly independent exactly when each component has at
//! most one pin and no even cycle. Multipliers follow from stationarity by
//! eliminating leaves towards the root.

use std::collections::VecDeque;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Row {
    pub a: u32,
    pub b: u32,
    pub sa: f64,
    pub sb: f64,
    pub rhs: f64,
}

impl Row {
    #[inline]
    pub fn lhs(&self, z: &[f64]) -> f64 {
        self.sa * z[self.a as usize] + self.sb * z[self.b as usize]
    }
}

/// Objective `½‖z − t‖² + scale·c·z`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Objective<'a> {
    pub t: &'a [f64],
    pub c: &'a [f64],
    pub scale: f64,
}

impl Objective<'_> {
    #[inline]
    fn gradient(&self, i: usize, zi: f64) -> f64 {
        (zi - self.t[i]) + self.scale * self.c[i]
    }
}

/// A constraint that can enter the active set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Item {
    Row(usize),
    /// `z_i ≤ 1`
    Upper(usize),
    /// `−z_i ≤ 0`
    Lower(usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Pin {
    Free,
    /// Bound at `vertex`; `sign` +1 for `z ≤ 1`, −1 for `−z ≤ 0`.
    Bound {
        vertex: usize,
        sign: f64,
    },
    Edge {
        row: usize,
    },
}

const NONE: usize = usize::MAX;

/// Structure, minimizer and multipliers of one equality-constrained solve.
type EqualitySolution = (Structure, Vec<f64>, Vec<(Item, f64)>);

/// Spanning-forest description of a linearly independent active set.
#[derive(Clone, Debug)]
pub(crate) struct Structure {
    order: Vec<usize>,
    parent: Vec<usize>,
    parent_row: Vec<usize>,
    component: Vec<usize>,
    roots: Vec<usize>,
    pins: Vec<Pin>,
    sigma: Vec<f64>,
    kappa: Vec<f64>,
}

impl Structure {
    /// Returns `None` when the items are linearly dependent.
    fn build(rows: &[Row], items: &[Item], n: usize) -> Option<Structure> {
        let mut uf = UnionFind::new(n);
        let mut tree_rows = Vec::new();
        let mut cycle_rows = Vec::new();
        let mut bounds = Vec::new();
        for item in items {
            match *item {
                Item::Row(r) => {
                    let row = &rows[r];
                    if uf.union(row.a as usize, row.b as usize) {
                        tree_rows.push(r);
                    } else {
                        cycle_rows.push(r);
                    }
                }
                Item::Upper(i) => bounds.push((i, 1.0)),
                Item::Lower(i) => bounds.push((i, -1.0)),
            }
        }
        // compressed adjacency of the forest
        let mut offsets = vec![0usize; n + 1];
        for &r in &tree_rows {
            offsets[rows[r].a as usize + 1] += 1;
            offsets[rows[r].b as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut adjacency = vec![0usize; offsets[n]];
        for &r in &tree_rows {
            for v in [rows[r].a as usize, rows[r].b as usize] {
                adjacency[fill[v]] = r;
                fill[v] += 1;
            }
        }

        let mut order = Vec::with_capacity(n);
        let mut parent = vec![NONE; n];
        let mut parent_row = vec![NONE; n];
        let mut component = vec![NONE; n];
        let mut roots = Vec::new();
        let mut sigma = vec![0.0; n];
        let mut kappa = vec![0.0; n];
        let mut queue = VecDeque::new();
        for start in 0..n {
            if component[start] != NONE {
                continue;
            }
            let comp = roots.len();
            roots.push(start);
            component[start] = comp;
            sigma[start] = 1.0;
            queue.push_back(start);
            while let Some(i) = queue.pop_front() {
                order.push(i);
                for &r in &adjacency[offsets[i]..offsets[i + 1]] {
                    let row = &rows[r];
                    let (j, si, sj) = if row.a as usize == i {
                        (row.b as usize, row.sa, row.sb)
                    } else {
                        (row.a as usize, row.sb, row.sa)
                    };
                    if component[j] != NONE {
                        continue;
                    }
                    // si z_i + sj z_j = rhs
                    component[j] = comp;
                    parent[j] = i;
                    parent_row[j] = r;
                    sigma[j] = -sj * si * sigma[i];
                    kappa[j] = sj * (row.rhs - si * kappa[i]);
                    queue.push_back(j);
                }
            }
        }

        let mut pins = vec![Pin::Free; roots.len()];
        for &(vertex, sign) in &bounds {
            let comp = component[vertex];
            if pins[comp] != Pin::Free {
                return None;
            }
            pins[comp] = Pin::Bound { vertex, sign };
        }
        for &r in &cycle_rows {
            let row = &rows[r];
            let (a, b) = (row.a as usize, row.b as usize);
            let comp = component[a];
            let cf = row.sa * sigma[a] + row.sb * sigma[b];
            if cf == 0.0 || pins[comp] != Pin::Free {
                return None;
            }
            pins[comp] = Pin::Edge { row: r };
        }
        Some(Structure {
            order,
            parent,
            parent_row,
            component,
            roots,
            pins,
            sigma,
            kappa,
        })
    }

    /// Minimizer of the objective subject to the active constraints as
    /// equalities.
    fn minimizer(&self, rows: &[Row], obj: &Objective) -> Vec<f64> {
        let n = self.sigma.len();
        let n_comp = self.roots.len();
        let mut s = vec![0.0; n_comp];
        let mut pinned = vec![false; n_comp];
        for (k, pin) in self.pins.iter().enumerate() {
            match *pin {
                Pin::Free => {}
                Pin::Bound { vertex, sign } => {
                    let bound = if sign > 0.0 { 1.0 } else { 0.0 };
                    s[k] = (bound - self.kappa[vertex]) * self.sigma[vertex];
                    pinned[k] = true;
                }
                Pin::Edge { row } => {
                    let r = &rows[row];
                    let (a, b) = (r.a as usize, r.b as usize);
                    let cf = r.sa * self.sigma[a] + r.sb * self.sigma[b];
                    s[k] = (r.rhs - r.sa * self.kappa[a] - r.sb * self.kappa[b]) / cf;
                    pinned[k] = true;
                }
            }
        }
        let mut num = vec![0.0; n_comp];
        let mut num_c = vec![0.0; n_comp];
        let mut count = vec![0usize; n_comp];
        for i in 0..n {
            let k = self.component[i];
            if !pinned[k] {
                num[k] += self.sigma[i] * (obj.t[i] - self.kappa[i]);
                num_c[k] += self.sigma[i] * obj.c[i];
                count[k] += 1;
            }
        }
        for k in 0..n_comp {
            if !pinned[k] {
                s[k] = (num[k] - obj.scale * num_c[k]) / count[k] as f64;
            }
        }
        (0..n)
            .map(|i| self.sigma[i] * s[self.component[i]] + self.kappa[i])
            .collect()
    }

    /// Solves `residual + Σ m·normal = 0` over the active constraints.
    ///
    /// Returns each vertex's parent-row multiplier and each component's pin
    /// multiplier; for free components the leftover at the root is dropped.
    fn eliminate(&self, rows: &[Row], residual: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = residual.len();
        let mut r0 = residual.to_vec();
        let mut r1 = vec![0.0; n];
        for pin in &self.pins {
            match *pin {
                Pin::Free => {}
                Pin::Bound { vertex, sign } => r1[vertex] += sign,
                Pin::Edge { row } => {
                    let r = &rows[row];
                    r1[r.a as usize] += r.sa;
                    r1[r.b as usize] += r.sb;
                }
            }
        }
        let mut m0 = vec![0.0; n];
        let mut m1 = vec![0.0; n];
        for &i in self.order.iter().rev() {
            let p = self.parent[i];
            if p == NONE {
                continue;
            }
            let row = &rows[self.parent_row[i]];
            let (si, sp) = if row.a as usize == i {
                (row.sa, row.sb)
            } else {
                (row.sb, row.sa)
            };
            m0[i] = -r0[i] * si;
            m1[i] = -r1[i] * si;
            r0[p] += m0[i] * sp;
            r1[p] += m1[i] * sp;
        }
        let theta: Vec<f64> = self
            .roots
            .iter()
            .zip(&self.pins)
            .map(|(&root, pin)| match pin {
                Pin::Free => 0.0,
                _ => -r0[root] / r1[root],
            })
            .collect();
        let tree = (0..n)
            .map(|i| {
                if self.parent[i] == NONE {
                    0.0
                } else {
                    m0[i] + theta[self.component[i]] * m1[i]
                }
            })
            .collect();
        (tree, theta)
    }

    /// Multiplier per active item, from [`eliminate`](Self::eliminate).
    fn item_multipliers(&self, rows: &[Row], residual: &[f64]) -> Vec<(Item, f64)> {
        let (tree, pins) = self.eliminate(rows, residual);
        let mut out = Vec::new();
        for (i, &m) in tree.iter().enumerate() {
            if self.parent_row[i] != NONE {
                out.push((Item::Row(self.parent_row[i]), m));
            }
        }
        for (k, pin) in self.pins.iter().enumerate() {
            match *pin {
                Pin::Free => {}
                Pin::Bound { vertex, sign } => {
                    let item = if sign > 0.0 {
                        Item::Upper(vertex)
                    } else {
                        Item::Lower(vertex)
                    };
                    out.push((item, pins[k]));
                }
                Pin::Edge { row } => out.push((Item::Row(row), pins[k])),
            }
        }
        out
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

#[derive(Clone, Debug)]
pub(crate) struct ProjectionResult {
    pub z: Vec<f64>,
    /// Multiplier per row (zero for inactive rows).
    pub row_mult: Vec<f64>,
    /// Signed bound multiplier per variable: > 0 upper, < 0 lower.
    pub box_mult: Vec<f64>,
    pub active: Vec<Item>,
    pub structure: Structure,
    pub iterations: usize,
    pub max_violation: f64,
}

/// Largest violation of rows or bounds.
pub(crate) fn max_violation(rows: &[Row], z: &[f64]) -> f64 {
    let rows_v = rows.iter().map(|r| r.lhs(z) - r.rhs).fold(0.0f64, f64::max);
    let box_v = z.iter().map(|&v| (-v).max(v - 1.0)).fold(0.0f64, f64::max);
    rows_v.max(box_v)
}

fn normal(rows: &[Row], item: Item, n: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    match item {
        Item::Row(r) => {
            v[rows[r].a as usize] += rows[r].sa;
            v[rows[r].b as usize] += rows[r].sb;
        }
        Item::Upper(i) => v[i] = 1.0,
        Item::Lower(i) => v[i] = -1.0,
    }
    v
}

/// Most violated constraint at `z`, if any exceeds `tol`.
fn most_violated(rows: &[Row], z: &[f64], tol: f64) -> Option<Item> {
    let mut best: Option<(Item, f64)> = None;
    for (r, row) in rows.iter().enumerate() {
        let v = row.lhs(z) - row.rhs;
        if v > tol && best.map_or(true, |(_, b)| v > b) {
            best = Some((Item::Row(r), v));
        }
    }
    for (i, &zi) in z.iter().enumerate() {
        if zi - 1.0 > tol && best.map_or(true, |(_, b)| zi - 1.0 > b) {
            best = Some((Item::Upper(i), zi - 1.0));
        }
        if -zi > tol && best.map_or(true, |(_, b)| -zi > b) {
            best = Some((Item::Lower(i), -zi));
        }
    }
    best.map(|(item, _)| item)
}

struct State<'a> {
    rows: &'a [Row],
    obj: &'a Objective<'a>,
    n: usize,
    active: Vec<Item>,
    /// Multiplier per item, indexed by [`State::key`]; zero when inactive.
    mult: Vec<f64>,
    structure: Structure,
    z: Vec<f64>,
}

impl<'a> State<'a> {
    fn key(&self, item: Item) -> usize {
        match item {
            Item::Row(r) => r,
            Item::Upper(i) => self.rows.len() + i,
            Item::Lower(i) => self.rows.len() + self.n + i,
        }
    }

    fn m(&self, item: Item) -> f64 {
        self.mult[self.key(item)]
    }

    /// Replaces the active set and its multipliers.
    fn set_active(&mut self, active: Vec<Item>, mult: &[(Item, f64)]) {
        for &item in &self.active {
            let k = self.key(item);
            self.mult[k] = 0.0;
        }
        for &(item, m) in mult {
            let k = self.key(item);
            self.mult[k] = m;
        }
        self.active = active;
    }

    fn gradient(&self, z: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.obj.gradient(i, z[i])).collect()
    }

    /// Equality minimizer and multipliers for `items`, if independent.
    fn solve(&self, items: &[Item]) -> Option<EqualitySolution> {
        let structure = Structure::build(self.rows, items, self.n)?;
        let z = structure.minimizer(self.rows, self.obj);
        let g = self.gradient(&z);
        let mult = structure.item_multipliers(self.rows, &g);
        Some((structure, z, mult))
    }

    fn drop_item(&mut self, item: Item) {
        self.active.retain(|&a| a != item);
        let k = self.key(item);
        self.mult[k] = 0.0;
        self.structure =
            Structure::build(self.rows, &self.active, self.n).expect("subset of an independent set");
    }
}

/// Goldfarb–Idnani iterations from the given initial active set.
pub(crate) fn project(
    rows: &[Row],
    obj: &Objective,
    initial: &[Item],
    feasibility_tol: f64,
) -> Result<ProjectionResult> {
    let n = obj.t.len();
    let empty = Structure::build(rows, &[], n).expect("empty set is independent");
    let mut state = State {
        rows,
        obj,
        n,
        active: Vec::new(),
        mult: vec![0.0; rows.len() + 2 * n],
        z: empty.minimizer(rows, obj),
        structure: empty,
    };

    // dual-feasible start: keep a prefix-independent subset of the initial
    // items, then drop negative multipliers one at a time
    let mut start: Vec<Item> = Vec::new();
    for &item in initial {
        if start.contains(&item) {
            continue;
        }
        start.push(item);
        if Structure::build(rows, &start, n).is_none() {
            start.pop();
        }
    }
    loop {
        let (structure, z, mult) = state.solve(&start).expect("independent by construction");
        let worst = mult
            .iter()
            .filter(|(_, m)| *m < 0.0)
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(item, _)| *item);
        match worst {
            Some(item) => start.retain(|&a| a != item),
            None => {
                state.set_active(start, &mult);
                state.structure = structure;
                state.z = z;
                break;
            }
        }
    }

    let budget = 20 * (n + rows.len()) + 1000;
    let mut iterations = 0;
    while let Some(p) = most_violated(rows, &state.z, feasibility_tol) {
        loop {
            iterations += 1;
            if iterations > budget {
                return Err(Error::Solver(format!(
                    "active-set method exceeded {budget} iterations"
                )));
            }
            let mut items = state.active.clone();
            items.push(p);
            match state.solve(&items) {
                Some((structure, z_full, mult_full)) => {
                    let full_p = mult_full
                        .iter()
                        .find(|(item, _)| *item == p)
                        .map_or(0.0, |(_, m)| *m);
                    // first active multiplier to reach zero along the path
                    let mut block: Option<(Item, f64)> = None;
                    for &(item, m_full) in &mult_full {
                        if item == p || m_full >= 0.0 {
                            continue;
                        }
                        let m = state.m(item);
                        let tau = if m <= 0.0 { 0.0 } else { m / (m - m_full) };
                        if block.map_or(true, |(_, b)| tau < b) {
                            block = Some((item, tau));
                        }
                    }
                    match block {
                        None => {
                            if full_p <= 0.0 {
                                return Err(Error::Solver(
                                    "added constraint received a non-positive multiplier".into(),
                                ));
                            }
                            state.set_active(items, &mult_full);
                            state.structure = structure;
                            state.z = z_full;
                            break;
                        }
                        Some((item, tau)) => {
                            for (i, zi) in state.z.iter_mut().enumerate() {
                                *zi += tau * (z_full[i] - *zi);
                            }
                            for &(it, m_full) in &mult_full {
                                if it != p {
                                    let k = state.key(it);
                                    state.mult[k] += tau * (m_full - state.mult[k]);
                                }
                            }
                            state.drop_item(item);
                        }
                    }
                }
                None => {
                    // p depends on the active set: pure dual step
                    let np = normal(rows, p, n);
                    let neg: Vec<f64> = np.iter().map(|v| -v).collect();
                    let r = state.structure.item_multipliers(rows, &neg);
                    let mut block: Option<(Item, f64)> = None;
                    for &(item, ri) in &r {
                        if ri > 0.0 {
                            let t = state.m(item).max(0.0) / ri;
                            if block.map_or(true, |(_, b)| t < b) {
                                block = Some((item, t));
                            }
                        }
                    }
                    let Some((item, t)) = block else {
                        return Err(Error::Solver("constraints are infeasible".into()));
                    };
                    for &(it, ri) in &r {
                        let k = state.key(it);
                        state.mult[k] -= t * ri;
                    }
                    state.drop_item(item);
                }
            }
        }
    }

    let mut row_mult = vec![0.0; rows.len()];
    let mut box_mult = vec![0.0; n];
    for &item in &state.active {
        let m = state.m(item).max(0.0);
        match item {
            Item::Row(r) => row_mult[r] = m,
            Item::Upper(i) => box_mult[i] = m,
            Item::Lower(i) => box_mult[i] = -m,
        }
    }
    let max_violation = max_violation(rows, &state.z);
    Ok(ProjectionResult {
        z: state.z,
        row_mult,
        box_mult,
        active: state.active,
        structure: state.structure,
        iterations,
        max_violation,
    })
}

/// Row multipliers solving `c + Σ λ·normal = 0` away from the bound pins,
/// clipped at zero. Used as a dual certificate for the linear objective.
pub(crate) fn linear_multipliers(rows: &[Row], structure: &Structure, c: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; rows.len()];
    for (item, m) in structure.item_multipliers(rows, c) {
        if let Item::Row(r) = item {
            out[r] = m.max(0.0);
        }
    }
    out
}

/// Lagrangian lower bound of `min c·z` over the polytope for multipliers
/// `lambda ≥ 0`, keeping the box inside the inner minimization.
pub(crate) fn lagrangian_bound(rows: &[Row], c: &[f64], lambda: &[f64]) -> f64 {
    let mut reduced = c.to_vec();
    let mut offset = 0.0;
    for (row, &l) in rows.iter().zip(lambda) {
        if l > 0.0 {
            reduced[row.a as usize] += l * row.sa;
            reduced[row.b as usize] += l * row.sb;
            offset += l * row.rhs;
        }
    }
    reduced.iter().map(|r| r.min(0.0)).sum::<f64>() - offset
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diff(v: u32, u: u32, rhs: f64) -> Row {
        Row {
            a: v,
            b: u,
            sa: 1.0,
            sb: -1.0,
            rhs,
        }
    }

    fn pair(u: u32, v: u32, rhs: f64) -> Row {
        Row {
            a: u,
            b: v,
            sa: 1.0,
            sb: 1.0,
            rhs,
        }
    }

    #[test]
    fn single_difference_row() {
        // α_a − α_b ≤ 0.2 from t = (1, 0)
        let rows = [diff(0, 1, 0.2)];
        let t = [1.0, 0.0];
        let c = [0.0, 0.0];
        let obj = Objective {
            t: &t,
            c: &c,
            scale: 1.0,
        };
        let res = project(&rows, &obj, &[], 1e-12).unwrap();
        assert!((res.z[0] - 0.6).abs() < 1e-14);
        assert!((res.z[1] - 0.4).abs() < 1e-14);
        assert!((res.row_mult[0] - 0.4).abs() < 1e-14);
    }

    #[test]
    fn odd_cycle_pins_the_component() {
        // triangle of pair sums ≤ 1: only the point 1/2 fits all three
        let rows = [pair(0, 1, 1.0), pair(1, 2, 1.0), pair(0, 2, 1.0), pair(2, 3, 1.3)];
        let t = [1.0; 4];
        let c = [0.0; 4];
        let obj = Objective {
            t: &t,
            c: &c,
            scale: 1.0,
        };
        let res = project(&rows, &obj, &[], 1e-12).unwrap();
        for i in 0..3 {
            assert!((res.z[i] - 0.5).abs() < 1e-14, "{:?}", res.z);
        }
        assert!((res.z[3] - 0.8).abs() < 1e-14);
    }

    #[test]
    fn dependent_constraints_are_handled() {
        // even cycle: z0 − z1 ≤ 0, z1 − z2 ≤ 0, z0 − z2 ≤ 0 with reversed targets
        let rows = [diff(0, 1, 0.0), diff(1, 2, 0.0), diff(0, 2, 0.0)];
        let t = [1.0, 0.5, 0.0];
        let c = [0.0; 3];
        let obj = Objective {
            t: &t,
            c: &c,
            scale: 1.0,
        };
        let res = project(&rows, &obj, &[], 1e-12).unwrap();
        for i in 0..3 {
            assert!((res.z[i] - 0.5).abs() < 1e-14, "{:?}", res.z);
        }
    }

    #[test]
    fn warm_start_gives_the_same_point() {
        let rows = [pair(0, 1, 1.2), pair(1, 2, 1.1), diff(0, 2, 0.1)];
        let t = [1.0, 1.0, 0.3];
        let c = [0.0; 3];
        let obj = Objective {
            t: &t,
            c: &c,
            scale: 1.0,
        };
        let cold = project(&rows, &obj, &[], 1e-12).unwrap();
        let warm = project(
            &rows,
            &obj,
            &[Item::Row(2), Item::Upper(1), Item::Row(0), Item::Lower(2)],
            1e-12,
        )
        .unwrap();
        for (a, b) in cold.z.iter().zip(&warm.z) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn bound_pins_and_lagrangian_bound() {
        // maximize α_0 + α_1 subject to α_0 + α_1 ≤ 1.2 via c = (−1, −1)
        let rows = [pair(0, 1, 1.2)];
        let t = [1.0, 1.0];
        let c = [-1.0, -1.0];
        let obj = Objective {
            t: &t,
            c: &c,
            scale: 1.0,
        };
        let res = project(&rows, &obj, &[], 1e-12).unwrap();
        assert!((res.z[0] - 0.6).abs() < 1e-14);
        let lambda = linear_multipliers(&rows, &res.structure, &c);
        let bound = lagrangian_bound(&rows, &c, &lambda);
        assert!((bound + 1.2).abs() < 1e-14);
    }
}
