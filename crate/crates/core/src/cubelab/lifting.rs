//! Open boxes and a bounded search for equivariant uniform lifts.
//!
//! An open box is given by `n, k`, a subobject `C ⊆ I^n` and a point
//! `ζ : I^n → I^k`. Its domain is the sub-presheaf of `I^n × I^k` whose
//! cells `(x, y)` satisfy `y = ζ ∘ x` or `x ∈ C`.
//!
//! A lifting problem against `f : E → B` is a box together with a
//! commuting square: a natural map `t` from the box into `E` and a cell
//! `b ∈ B_{n+k}` with `f ∘ t = b` on the box. A lift is a cell of
//! `E_{n+k}` over `b` extending `t`. Uniformity asks for a choice of lifts
//! compatible with every pullback of boxes along `α × σ`, where
//! `α : I^m → I^n` and `σ` permutes the `k` box directions.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::cube::{automorphisms, enumerate_hom, hom_index, CubeMap};
use super::presheaf::{Arrow, Presheaf};
use super::{representable, CubicalSet, LabError};

/// Largest cube dimension whose subobjects are enumerated.
pub const MAX_SUBOBJECT_DIM: usize = 2;

/// A sub-presheaf of `I^n`, as a cell predicate per level.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subobject {
    pub n: usize,
    pub cells: Vec<Vec<bool>>,
}

impl Subobject {
    pub fn empty(n: usize, dmax: usize) -> Subobject {
        Subobject { n, cells: (0..=dmax).map(|d| vec![false; (d + 2).pow(n as u32)]).collect() }
    }

    pub fn full(n: usize, dmax: usize) -> Subobject {
        Subobject { n, cells: (0..=dmax).map(|d| vec![true; (d + 2).pow(n as u32)]).collect() }
    }

    /// The sub-presheaf generated by the given cells of `I^n`.
    pub fn generated(n: usize, dmax: usize, gens: &[CubeMap]) -> Subobject {
        let mut s = Subobject::empty(n, dmax);
        for g in gens {
            for d in 0..=dmax {
                for a in enumerate_hom(d, g.dom) {
                    s.cells[d][hom_index(&g.after(&a))] = true;
                }
            }
        }
        s
    }

    pub fn contains(&self, x: &CubeMap) -> bool {
        self.cells[x.dom][hom_index(x)]
    }

    /// `α*C = {x | α ∘ x ∈ C}` for `α : I^m → I^n`.
    pub fn pullback(&self, alpha: &CubeMap) -> Subobject {
        let dmax = self.cells.len() - 1;
        let cells = (0..=dmax)
            .map(|d| enumerate_hom(d, alpha.dom).iter().map(|x| self.contains(&alpha.after(x))).collect())
            .collect();
        Subobject { n: alpha.dom, cells }
    }

    /// The non-degenerate cells, which generate the subobject.
    pub fn generators(&self) -> Vec<CubeMap> {
        let mut out = Vec::new();
        for d in 0..=self.n.min(self.cells.len() - 1) {
            for x in enumerate_hom(d, self.n) {
                if x.is_mono() && self.contains(&x) {
                    out.push(x);
                }
            }
        }
        out
    }

    pub fn describe(&self) -> String {
        let g = self.generators();
        if g.is_empty() {
            "∅".into()
        } else if g.iter().any(|x| x.is_identity()) {
            format!("I^{}", self.n)
        } else {
            let parts: Vec<String> = maximal(&g).iter().map(ToString::to_string).collect();
            format!("⟨{}⟩", parts.join(" ∪ "))
        }
    }
}

/// Generators not contained in the image of another generator.
fn maximal(gens: &[CubeMap]) -> Vec<CubeMap> {
    gens.iter()
        .filter(|g| {
            !gens.iter().any(|h| h.dom > g.dom && enumerate_hom(g.dom, h.dom).iter().any(|a| h.after(a) == **g))
        })
        .cloned()
        .collect()
}

/// Every sub-presheaf of `I^n` truncated at `dmax`, for `n ≤ MAX_SUBOBJECT_DIM`.
pub fn subobjects(n: usize, dmax: usize) -> Result<Vec<Subobject>, LabError> {
    if n > MAX_SUBOBJECT_DIM {
        return Err(LabError::BoundExceeded {
            what: format!("subobject enumeration of I^{n}"),
            bound: MAX_SUBOBJECT_DIM,
        });
    }
    let monos: Vec<CubeMap> = (0..=n.min(dmax)).flat_map(|d| enumerate_hom(d, n)).filter(CubeMap::is_mono).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << monos.len()) {
        let gens: Vec<CubeMap> =
            monos.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, m)| m.clone()).collect();
        let s = Subobject::generated(n, dmax, &gens);
        let key: Vec<usize> = monos.iter().map(|m| usize::from(s.contains(m))).collect();
        if seen.insert(key) {
            out.push(s);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OpenBoxSpec {
    pub n: usize,
    pub k: usize,
    pub c: Subobject,
    pub zeta: CubeMap,
}

impl OpenBoxSpec {
    pub fn describe(&self) -> BoxDescription {
        BoxDescription { n: self.n, k: self.k, subobject: self.c.describe(), zeta: self.zeta.to_string() }
    }

    /// Whether the cell `(x, y)` of `I^n × I^k` lies in the box.
    pub fn contains(&self, cell: &CubeMap) -> bool {
        let (x, y) = cell.split(self.n);
        y == self.zeta.after(&x) || self.c.contains(&x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoxDescription {
    pub n: usize,
    pub k: usize,
    pub subobject: String,
    pub zeta: String,
}

/// The box as a sub-presheaf of `I^(n+k)`, with its inclusion.
#[derive(Clone, Debug)]
pub struct OpenBox {
    pub spec: OpenBoxSpec,
    pub shape: CubicalSet,
    /// `inclusion[d][i]` is the index in `I^(n+k)` of cell `i` of level `d`.
    pub inclusion: Vec<Vec<usize>>,
    /// Cube map underlying each cell of the shape.
    pub cells: Vec<Vec<CubeMap>>,
}

pub fn build_open_box(spec: &OpenBoxSpec, dmax: usize) -> Result<OpenBox, LabError> {
    if spec.k == 0 {
        return Err(LabError::Invalid("an open box needs at least one direction".into()));
    }
    if spec.n + spec.k > dmax {
        return Err(LabError::BoundExceeded { what: format!("box dimension {}", spec.n + spec.k), bound: dmax });
    }
    if spec.zeta.dom != spec.n || spec.zeta.cod != spec.k || spec.c.n != spec.n {
        return Err(LabError::DimensionMismatch { expected: spec.n, found: spec.zeta.dom });
    }
    let (cube, all) = representable(spec.n + spec.k, dmax);
    let keep: Vec<Vec<bool>> = all.iter().map(|lv| lv.iter().map(|c| spec.contains(c)).collect()).collect();
    let (shape, inclusion) = cube.subpresheaf(&keep)?;
    let cells = inclusion.iter().enumerate().map(|(d, lv)| lv.iter().map(|&i| all[d][i].clone()).collect()).collect();
    Ok(OpenBox { spec: spec.clone(), shape, inclusion, cells })
}

/// A natural map between truncated cubical sets, given levelwise.
#[derive(Clone, Debug)]
pub struct CubeSetMap {
    pub src: CubicalSet,
    pub tgt: CubicalSet,
    pub map: Vec<Vec<usize>>,
}

impl CubeSetMap {
    pub fn new(src: CubicalSet, tgt: CubicalSet, map: Vec<Vec<usize>>) -> Result<CubeSetMap, LabError> {
        if src.dmax() != tgt.dmax() {
            return Err(LabError::TruncationMismatch(src.dmax(), tgt.dmax()));
        }
        for (ai, a) in src.cat.arrows.iter().enumerate() {
            for x in 0..src.sizes[a.cod()] {
                if map[a.dom()][src.act[ai][x]] != tgt.act[ai][map[a.cod()][x]] {
                    return Err(LabError::NotFunctorial(format!("map is not natural in {a}")));
                }
            }
        }
        Ok(CubeSetMap { src, tgt, map })
    }

    pub fn identity(x: CubicalSet) -> CubeSetMap {
        let map = x.sizes.iter().map(|&n| (0..n).collect()).collect();
        CubeSetMap { src: x.clone(), tgt: x, map }
    }

    pub fn to_terminal(x: CubicalSet) -> CubeSetMap {
        let map = x.sizes.iter().map(|&n| vec![0; n]).collect();
        let tgt = Presheaf::terminal(x.cat.clone());
        CubeSetMap { src: x, tgt, map }
    }
}

/// The box with `n = k = 1`, `C` the vertex `0` and `ζ = 0`, viewed as a
/// cubical set mapped to the terminal one. It has no filler for its own
/// inclusion, so it is not a fibration.
pub fn open_box_non_example(dmax: usize) -> Result<CubeSetMap, LabError> {
    let zero = CubeMap::from_coords(0, &[super::Coord::Zero]);
    let spec = OpenBoxSpec {
        n: 1,
        k: 1,
        c: Subobject::generated(1, dmax, std::slice::from_ref(&zero)),
        zeta: CubeMap::from_coords(1, &[super::Coord::Zero]),
    };
    Ok(CubeSetMap::to_terminal(build_open_box(&spec, dmax)?.shape))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LiftBounds {
    pub n_max: usize,
    pub k_max: usize,
    pub budget: u64,
}

/// A commuting square from a box into `f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Square {
    /// Value of the top map on each cell of the box shape, by level.
    top: Vec<Vec<usize>>,
    bottom: usize,
}

struct BoxProblem {
    open_box: OpenBox,
    squares: Vec<Square>,
    index: HashMap<Square, usize>,
    lifts: Vec<Vec<usize>>,
}

/// All natural maps from the box shape into `E` lying over `b`.
fn enumerate_tops(bx: &OpenBox, f: &CubeSetMap, b: usize, budget: &mut u64) -> Result<Vec<Vec<Vec<usize>>>, LabError> {
    let shape = &bx.shape;
    let e = &f.src;
    let dmax = shape.dmax();
    // Admissible values: cells of E over the restriction of b.
    let domains: Vec<Vec<Vec<usize>>> = (0..=dmax)
        .map(|d| {
            bx.cells[d]
                .iter()
                .map(|c| {
                    let over = f.tgt.restrict(c, b);
                    (0..e.sizes[d]).filter(|&v| f.map[d][v] == over).collect()
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut assign: Vec<Vec<Option<usize>>> = shape.sizes.iter().map(|&s| vec![None; s]).collect();
    tops_rec(shape, e, &domains, &mut assign, &mut out, budget)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn force(
    shape: &CubicalSet,
    e: &CubicalSet,
    domains: &[Vec<Vec<usize>>],
    assign: &mut [Vec<Option<usize>>],
    trail: &mut Vec<(usize, usize)>,
    d: usize,
    c: usize,
    v: usize,
) -> bool {
    let mut queue = vec![(d, c, v)];
    while let Some((d, c, v)) = queue.pop() {
        match assign[d][c] {
            Some(w) if w == v => continue,
            Some(_) => return false,
            None => {}
        }
        if !domains[d][c].contains(&v) {
            return false;
        }
        assign[d][c] = Some(v);
        trail.push((d, c));
        for &ai in &shape.cat.into[d] {
            let p = shape.cat.arrows[ai].dom();
            queue.push((p, shape.act[ai][c], e.act[ai][v]));
        }
    }
    true
}

fn tops_rec(
    shape: &CubicalSet,
    e: &CubicalSet,
    domains: &[Vec<Vec<usize>>],
    assign: &mut Vec<Vec<Option<usize>>>,
    out: &mut Vec<Vec<Vec<usize>>>,
    budget: &mut u64,
) -> Result<(), LabError> {
    let next = (0..=shape.dmax()).find_map(|d| assign[d].iter().position(Option::is_none).map(|c| (d, c)));
    let Some((d, c)) = next else {
        out.push(assign.iter().map(|lv| lv.iter().map(|v| v.unwrap()).collect()).collect());
        return Ok(());
    };
    for &v in &domains[d][c] {
        if *budget == 0 {
            return Err(LabError::BudgetExceeded { budget: 0 });
        }
        *budget -= 1;
        let mut trail = Vec::new();
        if force(shape, e, domains, assign, &mut trail, d, c, v) {
            tops_rec(shape, e, domains, assign, out, budget)?;
        }
        for (d, c) in trail {
            assign[d][c] = None;
        }
    }
    Ok(())
}

fn find_lifts(bx: &OpenBox, f: &CubeSetMap, sq: &Square) -> Vec<usize> {
    let e = &f.src;
    let n = bx.spec.n + bx.spec.k;
    (0..e.sizes[n])
        .filter(|&l| f.map[n][l] == sq.bottom)
        .filter(|&l| {
            bx.cells
                .iter()
                .enumerate()
                .all(|(d, lv)| lv.iter().enumerate().all(|(i, c)| e.restrict(c, l) == sq.top[d][i]))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellValue {
    pub cell: String,
    pub value: String,
}

/// A lifting problem with no solution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefutingSquare {
    #[serde(rename = "box")]
    pub open_box: BoxDescription,
    /// Top map on the non-degenerate cells of the box.
    pub top: Vec<CellValue>,
    pub bottom: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LiftVerdict {
    Pass,
    NoLift,
    NoUniformChoice,
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftReport {
    pub verdict: LiftVerdict,
    pub certificate: String,
    pub dmax: usize,
    pub n_max: usize,
    pub k_max: usize,
    pub boxes: usize,
    pub squares: usize,
    pub uniformity_constraints: usize,
    pub search_nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refutation: Option<RefutingSquare>,
    /// A sample of chosen lifts when the check passes.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witness: Vec<ChosenLift>,
    pub message: String,
}

impl LiftReport {
    pub fn passed(&self) -> bool {
        self.verdict == LiftVerdict::Pass
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChosenLift {
    #[serde(rename = "box")]
    pub open_box: BoxDescription,
    pub squares: usize,
    pub sample_lift: String,
}

/// Every open box with `n ≤ n_max`, `1 ≤ k ≤ k_max`.
pub fn enumerate_boxes(n_max: usize, k_max: usize, dmax: usize) -> Result<Vec<OpenBoxSpec>, LabError> {
    let mut out = Vec::new();
    for n in 0..=n_max {
        let subs = subobjects(n, dmax)?;
        for k in 1..=k_max {
            if n + k > dmax {
                return Err(LabError::BoundExceeded { what: format!("box dimension {}", n + k), bound: dmax });
            }
            for c in &subs {
                for zeta in enumerate_hom(n, k) {
                    out.push(OpenBoxSpec { n, k, c: c.clone(), zeta });
                }
            }
        }
    }
    Ok(out)
}

fn nondegenerate_top(bx: &OpenBox, f: &CubeSetMap, sq: &Square) -> Vec<CellValue> {
    let mut out = Vec::new();
    for d in 0..=bx.shape.dmax() {
        for i in bx.shape.nondegenerate(d) {
            out.push(CellValue { cell: bx.cells[d][i].to_string(), value: f.src.labels[d][sq.top[d][i]].clone() });
        }
    }
    out
}

fn solve_box(spec: &OpenBoxSpec, f: &CubeSetMap, budget: u64) -> Result<BoxProblem, LabError> {
    let dmax = f.src.dmax();
    let open_box = build_open_box(spec, dmax)?;
    let n = spec.n + spec.k;
    let mut squares = Vec::new();
    let mut left = budget;
    for b in 0..f.tgt.sizes[n] {
        for top in enumerate_tops(&open_box, f, b, &mut left).map_err(|_| LabError::BudgetExceeded { budget })? {
            squares.push(Square { top, bottom: b });
        }
    }
    let index = squares.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let lifts = squares.iter().map(|sq| find_lifts(&open_box, f, sq)).collect();
    Ok(BoxProblem { open_box, squares, index, lifts })
}

/// Enumerate boxes and squares within bounds, look for lifts, and search for
/// a choice of lifts that is uniform in cube maps and equivariant in box
/// directions. The result is a bounded certificate for truncation `D`.
pub fn check_equivariant_lifting(f: &CubeSetMap, bounds: LiftBounds) -> Result<LiftReport, LabError> {
    let dmax = f.src.dmax();
    let specs = enumerate_boxes(bounds.n_max, bounds.k_max, dmax)?;
    let problems = solve_all(&specs, f, bounds.budget)?;
    let certificate = format!(
        "bounded certificate: truncation D = {dmax}, boxes with n ≤ {}, 1 ≤ k ≤ {}",
        bounds.n_max, bounds.k_max
    );
    let squares: usize = problems.iter().map(|p| p.squares.len()).sum();
    let mut report = LiftReport {
        verdict: LiftVerdict::Pass,
        certificate,
        dmax,
        n_max: bounds.n_max,
        k_max: bounds.k_max,
        boxes: specs.len(),
        squares,
        uniformity_constraints: 0,
        search_nodes: 0,
        refutation: None,
        witness: Vec::new(),
        message: String::new(),
    };

    for p in &problems {
        if let Some(si) = p.lifts.iter().position(Vec::is_empty) {
            let sq = &p.squares[si];
            report.verdict = LiftVerdict::NoLift;
            report.refutation = Some(RefutingSquare {
                open_box: p.open_box.spec.describe(),
                top: nondegenerate_top(&p.open_box, f, sq),
                bottom: f.tgt.labels[p.open_box.spec.n + p.open_box.spec.k][sq.bottom].clone(),
            });
            report.message = "no lift exists for this square".into();
            return Ok(report);
        }
    }

    // Nodes of the uniformity problem are (box, square) pairs.
    let box_index: HashMap<&OpenBoxSpec, usize> = specs.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut offsets = Vec::with_capacity(problems.len());
    let mut total = 0;
    for p in &problems {
        offsets.push(total);
        total += p.squares.len();
    }
    let mut domains: Vec<Vec<usize>> = problems.iter().flat_map(|p| p.lifts.iter().cloned()).collect();
    let mut edges: Vec<Edge> = Vec::new();
    for (bi, p) in problems.iter().enumerate() {
        let spec = &p.open_box.spec;
        for m in 0..=bounds.n_max {
            for alpha in enumerate_hom(m, spec.n) {
                for sigma in automorphisms(spec.k) {
                    let sigma_inv = inverse(&sigma);
                    let pulled = OpenBoxSpec {
                        n: m,
                        k: spec.k,
                        c: spec.c.pullback(&alpha),
                        zeta: sigma_inv.after(&spec.zeta).after(&alpha),
                    };
                    let pj = *box_index
                        .get(&pulled)
                        .ok_or_else(|| LabError::Invalid("pulled-back box not enumerated".into()))?;
                    let target = &problems[pj];
                    let mu = alpha.product(&sigma);
                    for (si, sq) in p.squares.iter().enumerate() {
                        let pulled_sq = pull_square(&p.open_box, &target.open_box, f, sq, &mu);
                        let sj = *target
                            .index
                            .get(&pulled_sq)
                            .ok_or_else(|| LabError::Invalid("pulled-back square not enumerated".into()))?;
                        edges.push(Edge { from: offsets[bi] + si, to: offsets[pj] + sj, mu: mu.clone() });
                    }
                }
            }
        }
    }
    edges.sort_by(|a, b| (a.from, a.to, &a.mu).cmp(&(b.from, b.to, &b.mu)));
    edges.dedup_by(|a, b| a.from == b.from && a.to == b.to && a.mu == b.mu);
    report.uniformity_constraints = edges.len();

    let mut csp = UniformCsp::new(&f.src, &edges, total, bounds.budget);
    let outcome = csp.solve(&mut domains);
    report.search_nodes = csp.nodes;
    match outcome {
        CspOutcome::Solved(choice) => {
            report.message = format!("uniform equivariant choice of lifts found for {total} squares");
            for (bi, p) in problems.iter().enumerate() {
                if let Some(&l) = (!p.squares.is_empty()).then(|| &choice[offsets[bi]]) {
                    let n = p.open_box.spec.n + p.open_box.spec.k;
                    report.witness.push(ChosenLift {
                        open_box: p.open_box.spec.describe(),
                        squares: p.squares.len(),
                        sample_lift: f.src.labels[n][l].clone(),
                    });
                }
            }
        }
        CspOutcome::Unsatisfiable => {
            report.verdict = LiftVerdict::NoUniformChoice;
            report.message = "lifts exist for every square but no uniform equivariant choice exists".into();
        }
        CspOutcome::BudgetExhausted => return Err(LabError::BudgetExceeded { budget: bounds.budget }),
    }
    Ok(report)
}

fn solve_all(specs: &[OpenBoxSpec], f: &CubeSetMap, budget: u64) -> Result<Vec<BoxProblem>, LabError> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(specs.len().max(1));
    let chunk = specs.len().div_ceil(workers).max(1);
    let results: Vec<Result<Vec<BoxProblem>, LabError>> = std::thread::scope(|s| {
        let handles: Vec<_> = specs
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(|spec| solve_box(spec, f, budget)).collect()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("lifting worker panicked")).collect()
    });
    let mut out = Vec::with_capacity(specs.len());
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

fn inverse(sigma: &CubeMap) -> CubeMap {
    let id = CubeMap::identity(sigma.dom);
    automorphisms(sigma.dom).into_iter().find(|t| t.after(sigma) == id).expect("automorphisms are invertible")
}

/// Restrict a square along `μ : I^(m+k) → I^(n+k)`, which maps the target
/// box into the source box.
fn pull_square(src: &OpenBox, tgt: &OpenBox, f: &CubeSetMap, sq: &Square, mu: &CubeMap) -> Square {
    let lookup: Vec<HashMap<&CubeMap, usize>> =
        src.cells.iter().map(|lv| lv.iter().enumerate().map(|(i, c)| (c, i)).collect()).collect();
    let top = tgt
        .cells
        .iter()
        .enumerate()
        .map(|(d, lv)| lv.iter().map(|c| sq.top[d][lookup[d][&mu.after(c)]]).collect())
        .collect();
    Square { top, bottom: f.tgt.restrict(mu, sq.bottom) }
}

struct Edge {
    from: usize,
    to: usize,
    mu: CubeMap,
}

enum CspOutcome {
    Solved(Vec<usize>),
    Unsatisfiable,
    BudgetExhausted,
}

/// Choice of one lift per node such that `L(to) = E(μ)(L(from))` on every
/// edge; arc consistency followed by backtracking.
struct UniformCsp<'a> {
    e: &'a CubicalSet,
    edges: &'a [Edge],
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
    nodes: u64,
    budget: u64,
}

impl<'a> UniformCsp<'a> {
    fn new(e: &'a CubicalSet, edges: &'a [Edge], total: usize, budget: u64) -> UniformCsp<'a> {
        let mut out = vec![Vec::new(); total];
        let mut inc = vec![Vec::new(); total];
        for (i, ed) in edges.iter().enumerate() {
            out[ed.from].push(i);
            inc[ed.to].push(i);
        }
        UniformCsp { e, edges, out, inc, nodes: 0, budget }
    }

    fn image(&self, ed: &Edge, v: usize) -> usize {
        self.e.restrict(&ed.mu, v)
    }

    fn arc_consistency(&self, domains: &mut [Vec<usize>]) -> bool {
        let mut queue: Vec<usize> = (0..self.edges.len()).collect();
        while let Some(i) = queue.pop() {
            let ed = &self.edges[i];
            let from_before = domains[ed.from].len();
            let to_dom: BTreeSet<usize> = domains[ed.to].iter().copied().collect();
            domains[ed.from].retain(|&v| to_dom.contains(&self.image(ed, v)));
            let images: BTreeSet<usize> = domains[ed.from].iter().map(|&v| self.image(ed, v)).collect();
            let to_before = domains[ed.to].len();
            domains[ed.to].retain(|v| images.contains(v));
            if domains[ed.from].is_empty() || domains[ed.to].is_empty() {
                return false;
            }
            for (node, before) in [(ed.from, from_before), (ed.to, to_before)] {
                if domains[node].len() != before {
                    queue.extend(self.out[node].iter().chain(&self.inc[node]).copied());
                }
            }
        }
        true
    }

    fn solve(&mut self, domains: &mut [Vec<usize>]) -> CspOutcome {
        if !self.arc_consistency(domains) {
            return CspOutcome::Unsatisfiable;
        }
        let mut assign = vec![None; domains.len()];
        match self.backtrack(domains, &mut assign) {
            Ok(true) => CspOutcome::Solved(assign.into_iter().map(Option::unwrap).collect()),
            Ok(false) => CspOutcome::Unsatisfiable,
            Err(()) => CspOutcome::BudgetExhausted,
        }
    }

    fn assign(
        &self,
        domains: &[Vec<usize>],
        assign: &mut [Option<usize>],
        trail: &mut Vec<usize>,
        node: usize,
        v: usize,
    ) -> bool {
        let mut queue = vec![(node, v)];
        while let Some((u, v)) = queue.pop() {
            match assign[u] {
                Some(w) if w == v => continue,
                Some(_) => return false,
                None => {}
            }
            if !domains[u].contains(&v) {
                return false;
            }
            assign[u] = Some(v);
            trail.push(u);
            for &i in &self.out[u] {
                let ed = &self.edges[i];
                queue.push((ed.to, self.image(ed, v)));
            }
            for &i in &self.inc[u] {
                let ed = &self.edges[i];
                if let Some(w) = assign[ed.from] {
                    if self.image(ed, w) != v {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn backtrack(&mut self, domains: &[Vec<usize>], assign: &mut Vec<Option<usize>>) -> Result<bool, ()> {
        let next = (0..domains.len()).filter(|&u| assign[u].is_none()).min_by_key(|&u| domains[u].len());
        let Some(u) = next else { return Ok(true) };
        for &v in &domains[u] {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(());
            }
            let mut trail = Vec::new();
            if self.assign(domains, assign, &mut trail, u, v) && self.backtrack(domains, assign)? {
                return Ok(true);
            }
            for t in trail {
                assign[t] = None;
            }
        }
        Ok(false)
    }
}
