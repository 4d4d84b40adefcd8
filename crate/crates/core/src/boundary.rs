//! Signed incidence matrices: the monolayer `B_k` of the flattened complex
//! and the cross-boundary maps of a layer pair seen from either layer.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;

use crate::complex::{CellClass, CellMultiComplex, CellRef, LayerPair};
use crate::error::{Error, Result};

/// Which layer of a pair the cross-boundary is taken with respect to.
///
/// `Lower` is the `(ℓ),m` family: the boundary drops faces on the lower
/// layer `ℓ`, so cross-edges map onto upper-layer vertices and the cones it
/// sees have their apex on the upper layer. `Upper` is the `ℓ,(m)` family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum View {
    Lower,
    Upper,
}

impl View {
    /// Class of the rows of `B_{k,n}` in this view.
    pub fn face_class(self, class: CellClass) -> CellClass {
        match self {
            View::Lower => CellClass::new(class.k - 1, class.n),
            View::Upper => CellClass::new(class.k, class.n - 1),
        }
    }

    /// Class one step up, whose boundary lands in `class`.
    pub fn coface_class(self, class: CellClass) -> CellClass {
        match self {
            View::Lower => CellClass::new(class.k + 1, class.n),
            View::Upper => CellClass::new(class.k, class.n + 1),
        }
    }

    /// Layer the view takes boundaries on.
    pub fn layer(self, pair: LayerPair) -> u32 {
        match self {
            View::Lower => pair.lower(),
            View::Upper => pair.upper(),
        }
    }

    /// The other layer of the pair, where the apexes of the view's cones live.
    pub fn opposite_layer(self, pair: LayerPair) -> u32 {
        match self {
            View::Lower => pair.upper(),
            View::Upper => pair.lower(),
        }
    }

    /// Resolves a layer id of the pair into a view.
    pub fn of_layer(pair: LayerPair, layer: u32) -> Option<View> {
        if layer == pair.lower() {
            Some(View::Lower)
        } else if layer == pair.upper() {
            Some(View::Upper)
        } else {
            None
        }
    }
}

/// A sparse matrix over {-1, 0, +1} with explicit row and column cells.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedIncidence {
    rows: Vec<CellRef>,
    cols: Vec<CellRef>,
    /// `(row, col, sign)` sorted by column, then row.
    entries: Vec<(usize, usize, i8)>,
}

impl SignedIncidence {
    /// Incidence of `rows` in the boundaries of `cols`.
    pub fn assemble(complex: &CellMultiComplex, rows: Vec<CellRef>, cols: Vec<CellRef>) -> Self {
        let row_index: BTreeMap<CellRef, usize> =
            rows.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let mut entries = Vec::new();
        for (j, col) in cols.iter().enumerate() {
            let mut column: Vec<(usize, usize, i8)> = complex
                .boundary(col)
                .unwrap_or(&[])
                .iter()
                .filter_map(|f| row_index.get(&f.cell).map(|&i| (i, j, f.sign)))
                .collect();
            column.sort_unstable();
            entries.extend(column);
        }
        SignedIncidence {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> &[CellRef] {
        &self.rows
    }

    pub fn cols(&self) -> &[CellRef] {
        &self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows.len(), self.cols.len())
    }

    pub fn entries(&self) -> &[(usize, usize, i8)] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.entries
            .iter()
            .find(|e| e.0 == row && e.1 == col)
            .map_or(0, |e| e.2)
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = (usize, i8)> + '_ {
        self.entries
            .iter()
            .filter(move |e| e.1 == col)
            .map(|e| (e.0, e.2))
    }

    pub fn transpose(&self) -> SignedIncidence {
        let mut entries: Vec<(usize, usize, i8)> =
            self.entries.iter().map(|&(i, j, s)| (j, i, s)).collect();
        entries.sort_unstable_by_key(|&(i, j, _)| (j, i));
        SignedIncidence {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            entries,
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.rows.len(), self.cols.len());
        for &(i, j, s) in &self.entries {
            m[(i, j)] = f64::from(s);
        }
        m
    }

    /// Exact integer product `self * other`.
    pub fn product(&self, other: &SignedIncidence) -> IntMatrix {
        assert_eq!(
            self.cols.len(),
            other.rows.len(),
            "incidence product with mismatched inner dimension"
        );
        let mut by_row: Vec<Vec<(usize, i64)>> = vec![Vec::new(); other.rows.len()];
        for &(i, j, s) in &other.entries {
            by_row[i].push((j, i64::from(s)));
        }
        let mut acc: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for &(i, j, a) in &self.entries {
            for &(c, b) in &by_row[j] {
                *acc.entry((i, c)).or_default() += i64::from(a) * b;
            }
        }
        IntMatrix {
            dims: (self.rows.len(), other.cols.len()),
            entries: acc.into_iter().filter(|(_, v)| *v != 0).collect(),
        }
    }

    /// `BᵀB`, assembled from integer sums.
    pub fn lower_gram(&self) -> DMatrix<f64> {
        let n = self.cols.len();
        let mut by_row: Vec<Vec<(usize, i8)>> = vec![Vec::new(); self.rows.len()];
        for &(i, j, s) in &self.entries {
            by_row[i].push((j, s));
        }
        let mut g = DMatrix::zeros(n, n);
        for row in &by_row {
            for &(a, sa) in row {
                for &(b, sb) in row {
                    g[(a, b)] += f64::from(sa * sb);
                }
            }
        }
        g
    }

    /// `BBᵀ`, assembled from integer sums.
    pub fn upper_gram(&self) -> DMatrix<f64> {
        self.transpose().lower_gram()
    }

    /// `row_id,col_id,sign` triplets with a header line.
    pub fn to_triplet_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["row_id", "col_id", "sign"])
            .expect("in-memory write");
        for &(i, j, s) in &self.entries {
            w.write_record([
                self.rows[i].to_string(),
                self.cols[j].to_string(),
                s.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }
}

/// Sparse integer matrix, the result of exact incidence products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub dims: (usize, usize),
    pub entries: Vec<((usize, usize), i64)>,
}

impl IntMatrix {
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Whether `B_{k,n}` exists in the second-order pipeline.
pub(crate) fn class_supported(class: CellClass) -> bool {
    let CellClass { k, n } = class;
    if k < -1 || n < -1 || (k == -1 && n == -1) {
        return false;
    }
    if class.is_cross() {
        k <= 1 && n <= 1
    } else {
        k <= 2 && n <= 2
    }
}

/// Monolayer incidence `B_k` (`k` ∈ {1, 2}) of the flattened complex.
pub fn monolayer_incidence(complex: &CellMultiComplex, k: u8) -> Result<SignedIncidence> {
    if !(1..=2).contains(&k) {
        return Err(Error::UnsupportedClass { k: k as i8, n: -1 });
    }
    let flat = complex.flatten();
    Ok(SignedIncidence::assemble(
        complex,
        flat.cells(k - 1).to_vec(),
        flat.cells(k).to_vec(),
    ))
}

/// Cross-boundary `B_{k,n}` of a pair in the given view.
///
/// Rows are the cells of class `(k-1, n)` (lower view) or `(k, n-1)` (upper
/// view); a row class that cannot hold cells gives a zero-row matrix.
pub fn cross_boundary(
    complex: &CellMultiComplex,
    pair: LayerPair,
    view: View,
    class: CellClass,
) -> Result<SignedIncidence> {
    complex.check_pair(pair)?;
    if !class_supported(class) {
        return Err(Error::UnsupportedClass {
            k: class.k,
            n: class.n,
        });
    }
    let rows = complex.class_members(pair, view.face_class(class));
    let cols = complex.class_members(pair, class);
    Ok(SignedIncidence::assemble(complex, rows, cols))
}

/// `B_{k,n}^{(ℓ),m}`.
pub fn cross_boundary_from(
    complex: &CellMultiComplex,
    pair: LayerPair,
    k: i8,
    n: i8,
) -> Result<SignedIncidence> {
    cross_boundary(complex, pair, View::Lower, CellClass::new(k, n))
}

/// `B_{k,n}^{ℓ,(m)}`.
pub fn cross_boundary_toward(
    complex: &CellMultiComplex,
    pair: LayerPair,
    k: i8,
    n: i8,
) -> Result<SignedIncidence> {
    cross_boundary(complex, pair, View::Upper, CellClass::new(k, n))
}

/// One consecutive boundary product.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainCheck {
    pub label: String,
    pub left_dims: (usize, usize),
    pub right_dims: (usize, usize),
    pub nonzeros: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ChainReport {
    pub checks: Vec<ChainCheck>,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for ChainReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} [{}x{}]*[{}x{}] nonzeros={} {}",
                c.label,
                c.left_dims.0,
                c.left_dims.1,
                c.right_dims.0,
                c.right_dims.1,
                c.nonzeros,
                if c.passed { "ok" } else { "FAIL" }
            )?;
        }
        Ok(())
    }
}

fn check(label: String, left: &SignedIncidence, right: &SignedIncidence) -> ChainCheck {
    let product = left.product(right);
    ChainCheck {
        label,
        left_dims: left.dims(),
        right_dims: right.dims(),
        nonzeros: product.entries.len(),
        passed: product.is_zero(),
    }
}

/// Exact integer check of every consecutive boundary product: the monolayer
/// `B_1 B_2` and, for every cross pair and view, `B_{k,n} B_{k+1,n}` (lower)
/// or `B_{k,n} B_{k,n+1}` (upper).
pub fn verify_chain(complex: &CellMultiComplex) -> ChainReport {
    let mut report = ChainReport::default();
    let b1 = monolayer_incidence(complex, 1).expect("order 1");
    let b2 = monolayer_incidence(complex, 2).expect("order 2");
    report
        .checks
        .push(check("monolayer B1*B2".into(), &b1, &b2));

    for cc in complex.cross_complexes() {
        let pair = cc.pair();
        for view in [View::Lower, View::Upper] {
            for k in -1..=1i8 {
                for n in -1..=1i8 {
                    let class = CellClass::new(k, n);
                    let next = view.coface_class(class);
                    if !class_supported(class) || !class_supported(next) {
                        continue;
                    }
                    let left = cross_boundary(complex, pair, view, class).expect("supported");
                    let right = cross_boundary(complex, pair, view, next).expect("supported");
                    let layer = view.layer(pair);
                    report.checks.push(check(
                        format!("X{pair} view {layer}: B({class})*B({next})"),
                        &left,
                        &right,
                    ));
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE_A: &str = r#"{
        "layers": [
            {"id": 1, "nodes": [1, 2], "edges": [[1, 2]]},
            {"id": 2, "nodes": [1]}
        ],
        "cross": [{"pair": [1, 2], "edges": [[1, 1], [2, 1]]}]
    }"#;

    const FIXTURE_AF: &str = r#"{
        "layers": [
            {"id": 1, "nodes": [1, 2], "edges": [[1, 2]]},
            {"id": 2, "nodes": [1]}
        ],
        "cross": [{"pair": [1, 2], "edges": [[1, 1], [2, 1]],
                   "cells2": [{"class": [1, 0], "faces": ["L1/k1/0", "X1-2/c0,0/1", "-X1-2/c0,0/0"]}]}]
    }"#;

    fn pair() -> LayerPair {
        LayerPair::new(1, 2).unwrap()
    }

    fn dense_i(b: &SignedIncidence) -> Vec<Vec<i8>> {
        let (r, c) = b.dims();
        (0..r)
            .map(|i| (0..c).map(|j| b.get(i, j)).collect())
            .collect()
    }

    #[test]
    fn monolayer_b1_of_fixture_a() {
        let x = CellMultiComplex::from_json(FIXTURE_A).unwrap();
        let b1 = monolayer_incidence(&x, 1).unwrap();
        assert_eq!(b1.dims(), (3, 3));
        // nodes: L1:1, L1:2, L2:1; edges: L1 edge, x1, x2
        assert_eq!(
            dense_i(&b1),
            vec![vec![-1, -1, 0], vec![1, 0, -1], vec![0, 1, 1]]
        );
        let b2 = monolayer_incidence(&x, 2).unwrap();
        assert_eq!(b2.dims(), (3, 0));
        assert!(monolayer_incidence(&x, 3).is_err());
    }

    #[test]
    fn filled_triangle_is_a_boundary() {
        let x = CellMultiComplex::from_json(
            r#"{"layers": [{"id": 1, "nodes": [1, 2, 3], "edges": [[1, 2], [2, 3], [1, 3]],
                "cells2": [["L1/k1/0", "L1/k1/1", "-L1/k1/2"]]}]}"#,
        )
        .unwrap();
        let b1 = monolayer_incidence(&x, 1).unwrap();
        let b2 = monolayer_incidence(&x, 2).unwrap();
        assert!(b1.product(&b2).is_zero());
        assert_eq!(dense_i(&b2), vec![vec![1], vec![1], vec![-1]]);
    }

    #[test]
    fn cross_boundaries_of_fixture_a() {
        let x = CellMultiComplex::from_json(FIXTURE_A).unwrap();
        let from = cross_boundary_from(&x, pair(), 0, 0).unwrap();
        assert_eq!(dense_i(&from), vec![vec![1, 1]]);
        assert_eq!(from.rows()[0].to_string(), "L2/k0/0");
        let toward = cross_boundary_toward(&x, pair(), 0, 0).unwrap();
        assert_eq!(dense_i(&toward), vec![vec![-1, 0], vec![0, -1]]);
    }

    #[test]
    fn cone_boundaries_follow_the_traversal() {
        let x = CellMultiComplex::from_json(FIXTURE_AF).unwrap();
        let b10 = cross_boundary_from(&x, pair(), 1, 0).unwrap();
        assert_eq!(dense_i(&b10), vec![vec![-1], vec![1]]);
        let b00 = cross_boundary_from(&x, pair(), 0, 0).unwrap();
        assert!(b00.product(&b10).is_zero());
        let toward = cross_boundary_toward(&x, pair(), 1, 0).unwrap();
        assert_eq!(toward.rows()[0].to_string(), "L1/k1/0");
        assert_eq!(dense_i(&toward), vec![vec![1]]);
    }

    #[test]
    fn absent_face_classes_give_zero_rows() {
        let x = CellMultiComplex::from_json(FIXTURE_AF).unwrap();
        let b = cross_boundary_from(&x, pair(), -1, 0).unwrap();
        assert_eq!(b.dims(), (0, 1));
        let b = cross_boundary_toward(&x, pair(), 1, -1).unwrap();
        assert_eq!(b.dims(), (0, 1));
        // squares are not bounded by order-2 cells
        let b = cross_boundary_from(&x, pair(), 1, 1).unwrap();
        assert_eq!(b.dims(), (0, 0));
    }

    #[test]
    fn order_three_classes_are_unsupported() {
        let x = CellMultiComplex::from_json(FIXTURE_A).unwrap();
        assert!(matches!(
            cross_boundary_from(&x, pair(), 2, 0),
            Err(Error::UnsupportedClass { k: 2, n: 0 })
        ));
        assert!(matches!(
            cross_boundary_toward(&x, pair(), 0, 2),
            Err(Error::UnsupportedClass { .. })
        ));
        assert!(matches!(
            cross_boundary_from(&x, LayerPair::new(1, 3).unwrap(), 0, 0),
            Err(Error::UnknownPair { .. })
        ));
    }

    #[test]
    fn chain_report_passes_on_fixtures() {
        for text in [FIXTURE_A, FIXTURE_AF] {
            let x = CellMultiComplex::from_json(text).unwrap();
            let report = verify_chain(&x);
            assert!(report.passed(), "{report}");
            assert!(report
                .checks
                .iter()
                .any(|c| c.label.contains("B(0,0)*B(1,0)")
                    && c.right_dims == (2, x.class_count(pair(), CellClass::new(1, 0)))));
        }
    }

    #[test]
    fn triplet_export() {
        let x = CellMultiComplex::from_json(FIXTURE_A).unwrap();
        let csv = cross_boundary_from(&x, pair(), 0, 0)
            .unwrap()
            .to_triplet_csv();
        assert_eq!(
            csv,
            "row_id,col_id,sign\nL2/k0/0,\"X1-2/c0,0/0\",1\nL2/k0/0,\"X1-2/c0,0/1\",1\n"
        );
    }

    #[test]
    fn gram_matrices() {
        let x = CellMultiComplex::from_json(FIXTURE_AF).unwrap();
        let b10 = cross_boundary_from(&x, pair(), 1, 0).unwrap();
        let g = b10.upper_gram();
        assert_eq!(g, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
        let dense = b10.to_dense();
        assert_eq!(dense.transpose() * &dense, b10.lower_gram());
    }
}
