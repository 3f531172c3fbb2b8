//! The germ `(X, 0)`, the partition `k` of its dimension, collections of
//! 1-forms in blocks, and the special-scheme ideal built from the maximal
//! minors of the per-block degeneracy matrices.
//!
//! Block indices are zero-based throughout this crate.

use std::collections::HashMap;

use rand::Rng;
use thiserror::Error;

use crate::polyring::{OneForm, Polynomial, Rational};
use crate::stdbasis::{self, BasisError, Ideal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GermError {
    #[error("partition is empty")]
    EmptyPartition,
    #[error("partition part {index} is zero")]
    ZeroPart { index: usize },
    #[error("partition sums to {sum}, expected {expected}")]
    PartitionSum { sum: usize, expected: usize },
    #[error("{equations} equations in {nvars} variables leave no positive dimension")]
    Dimension { nvars: usize, equations: usize },
    #[error("equation {index} does not vanish at the origin")]
    EquationAtOrigin { index: usize },
    #[error("expected {expected} blocks, found {found}")]
    BlockCount { expected: usize, found: usize },
    #[error("block {block} has {found} forms, expected {expected}")]
    BlockSize {
        block: usize,
        expected: usize,
        found: usize,
    },
    #[error("expected {expected} variables, found {found}")]
    VariableCount { expected: usize, found: usize },
    #[error("map {block} has {found} components, expected {expected}")]
    MapComponents {
        block: usize,
        expected: usize,
        found: usize,
    },
    #[error("component {component} of map {block} does not vanish at the origin")]
    MapAtOrigin { block: usize, component: usize },
    #[error("block index {index} out of range for {blocks} blocks")]
    BlockIndex { index: usize, blocks: usize },
}

/// A partition `k = (k_1, ..., k_s)` of the dimension `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self, GermError> {
        if parts.is_empty() {
            return Err(GermError::EmptyPartition);
        }
        if let Some(index) = parts.iter().position(|&k| k == 0) {
            return Err(GermError::ZeroPart { index });
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The partitioned integer `n`.
    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of forms `n - k_i + 1` in block `i`.
    pub fn block_size(&self, i: usize) -> usize {
        self.total() - self.parts[i] + 1
    }

    /// Every partition of `n` as a non-increasing sequence.
    pub fn all_of(n: usize) -> Vec<Partition> {
        fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition {
                    parts: prefix.clone(),
                });
                return;
            }
            for k in (1..=n.min(max)).rev() {
                prefix.push(k);
                go(n - k, k, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(n, n, &mut Vec::new(), &mut out);
        out
    }
}

/// A complete-intersection presentation `{f_1 = ... = f_{N-n} = 0}` of a
/// germ at the origin of `C^N`. Reducedness and isolatedness of the
/// singularity are trusted, not verified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarietyGerm {
    nvars: usize,
    equations: Vec<Polynomial>,
}

impl VarietyGerm {
    pub fn new(nvars: usize, equations: Vec<Polynomial>) -> Result<Self, GermError> {
        if equations.len() >= nvars {
            return Err(GermError::Dimension {
                nvars,
                equations: equations.len(),
            });
        }
        for f in &equations {
            if f.nvars() != nvars {
                return Err(GermError::VariableCount {
                    expected: nvars,
                    found: f.nvars(),
                });
            }
        }
        if let Some(index) = equations.iter().position(|f| !f.vanishes_at_origin()) {
            return Err(GermError::EquationAtOrigin { index });
        }
        Ok(VarietyGerm { nvars, equations })
    }

    /// The whole space `C^N`.
    pub fn smooth(nvars: usize) -> Self {
        VarietyGerm {
            nvars,
            equations: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn equations(&self) -> &[Polynomial] {
        &self.equations
    }

    pub fn codimension(&self) -> usize {
        self.equations.len()
    }

    pub fn dimension(&self) -> usize {
        self.nvars - self.equations.len()
    }

    /// Jacobian rows `df_1, ..., df_{N-n}`.
    pub fn jacobian(&self) -> Vec<OneForm> {
        self.equations.iter().map(OneForm::differential).collect()
    }
}

/// The collection `{ω^(i)_j}`: block `i` holds `n - k_i + 1` forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormCollection {
    partition: Partition,
    blocks: Vec<Vec<OneForm>>,
}

impl FormCollection {
    pub fn new(partition: Partition, blocks: Vec<Vec<OneForm>>) -> Result<Self, GermError> {
        if blocks.len() != partition.len() {
            return Err(GermError::BlockCount {
                expected: partition.len(),
                found: blocks.len(),
            });
        }
        for (i, block) in blocks.iter().enumerate() {
            let expected = partition.block_size(i);
            if block.len() != expected {
                return Err(GermError::BlockSize {
                    block: i,
                    expected,
                    found: block.len(),
                });
            }
        }
        let mut all = blocks.iter().flatten();
        if let Some(first) = all.next() {
            let n = first.nvars();
            if let Some(bad) = all.find(|w| w.nvars() != n) {
                return Err(GermError::VariableCount {
                    expected: n,
                    found: bad.nvars(),
                });
            }
        }
        Ok(FormCollection { partition, blocks })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn blocks(&self) -> &[Vec<OneForm>] {
        &self.blocks
    }

    pub fn nvars(&self) -> usize {
        self.blocks[0][0].nvars()
    }

    /// Applies `f` to every form, keeping the block structure.
    pub fn map_forms(&self, mut f: impl FnMut(usize, usize, &OneForm) -> OneForm) -> FormCollection {
        FormCollection {
            partition: self.partition.clone(),
            blocks: self
                .blocks
                .iter()
                .enumerate()
                .map(|(i, b)| b.iter().enumerate().map(|(j, w)| f(i, j, w)).collect())
                .collect(),
        }
    }
}

/// A collection of 1-forms with constant coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCollection(FormCollection);

impl LinearCollection {
    pub fn new(collection: FormCollection) -> Option<Self> {
        collection
            .blocks
            .iter()
            .flatten()
            .all(OneForm::is_constant)
            .then_some(LinearCollection(collection))
    }

    /// Integer coefficients drawn uniformly from `[-height, height]`.
    pub fn random<R: Rng>(nvars: usize, partition: &Partition, height: i64, rng: &mut R) -> Self {
        let blocks = (0..partition.len())
            .map(|i| {
                (0..partition.block_size(i))
                    .map(|_| {
                        OneForm::new(
                            (0..nvars)
                                .map(|_| Polynomial::from_integer(nvars, rng.gen_range(-height..=height)))
                                .collect(),
                        )
                    })
                    .collect()
            })
            .collect();
        LinearCollection(FormCollection {
            partition: partition.clone(),
            blocks,
        })
    }

    pub fn collection(&self) -> &FormCollection {
        &self.0
    }

    pub fn into_collection(self) -> FormCollection {
        self.0
    }
}

/// Jacobian rows followed by the forms of one block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegeneracyMatrix {
    pub block_index: usize,
    pub rows: Vec<Vec<Polynomial>>,
}

impl DegeneracyMatrix {
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn column_count(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }
}

fn check_shapes(germ: &VarietyGerm, collection: &FormCollection) -> Result<(), GermError> {
    let n = germ.dimension();
    if collection.partition.total() != n {
        return Err(GermError::PartitionSum {
            sum: collection.partition.total(),
            expected: n,
        });
    }
    if collection.nvars() != germ.nvars() {
        return Err(GermError::VariableCount {
            expected: germ.nvars(),
            found: collection.nvars(),
        });
    }
    Ok(())
}

pub fn build_degeneracy_matrix(
    germ: &VarietyGerm,
    collection: &FormCollection,
    block: usize,
) -> Result<DegeneracyMatrix, GermError> {
    check_shapes(germ, collection)?;
    let forms = collection.blocks.get(block).ok_or(GermError::BlockIndex {
        index: block,
        blocks: collection.blocks.len(),
    })?;
    let rows = germ
        .jacobian()
        .iter()
        .chain(forms.iter())
        .map(|w| w.coefficients().to_vec())
        .collect();
    Ok(DegeneracyMatrix {
        block_index: block,
        rows,
    })
}

/// All maximal minors, one per column subset of size `rows`, with subsets
/// in lexicographic order. Sub-minors are shared through a memo keyed by
/// column set.
pub fn maximal_minors(matrix: &DegeneracyMatrix) -> Vec<Polynomial> {
    let r = matrix.row_count();
    let n = matrix.column_count();
    assert!(r <= n, "more rows than columns");
    assert!(n <= 64, "column sets are tracked as 64-bit masks");
    let nvars = matrix.rows[0][0].nvars();
    let mut memo: HashMap<u64, Polynomial> = HashMap::new();
    column_subsets(n, r)
        .into_iter()
        .map(|cols| {
            let mask = cols.iter().fold(0u64, |m, &c| m | (1 << c));
            laplace(&matrix.rows, mask, nvars, &mut memo)
        })
        .collect()
}

/// Determinant of the bottom `|mask|` rows restricted to the columns in
/// `mask`, expanded along its first row.
fn laplace(rows: &[Vec<Polynomial>], mask: u64, nvars: usize, memo: &mut HashMap<u64, Polynomial>) -> Polynomial {
    let size = mask.count_ones() as usize;
    if size == 0 {
        return Polynomial::one(nvars);
    }
    if let Some(p) = memo.get(&mask) {
        return p.clone();
    }
    let row = &rows[rows.len() - size];
    let mut acc = Polynomial::zero(nvars);
    let mut sign_positive = true;
    for (c, entry) in row.iter().enumerate() {
        if mask & (1 << c) == 0 {
            continue;
        }
        if !entry.is_zero() {
            let sub = laplace(rows, mask & !(1 << c), nvars, memo);
            let term = entry * &sub;
            acc = if sign_positive { &acc + &term } else { &acc - &term };
        }
        sign_positive = !sign_positive;
    }
    memo.insert(mask, acc.clone());
    acc
}

fn column_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for c in start..n {
            if n - c < k - cur.len() {
                break;
            }
            cur.push(c);
            go(c + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `(f_1, ..., f_{N-n})` plus the maximal minors of every degeneracy
/// matrix, equations first, then minors block by block, zeros dropped.
pub fn special_scheme_ideal(germ: &VarietyGerm, collection: &FormCollection) -> Result<Ideal, GermError> {
    check_shapes(germ, collection)?;
    let mut gens: Vec<Polynomial> = germ.equations().to_vec();
    for i in 0..collection.blocks.len() {
        let m = build_degeneracy_matrix(germ, collection, i)?;
        gens.extend(maximal_minors(&m));
    }
    Ok(Ideal::new(germ.nvars(), gens))
}

/// Differentials of map germs: block `i` is `d f^(i)_1, ..., d f^(i)_{n-k_i+1}`.
pub fn collection_from_maps(
    maps: &[Vec<Polynomial>],
    partition: &Partition,
) -> Result<FormCollection, GermError> {
    if maps.len() != partition.len() {
        return Err(GermError::BlockCount {
            expected: partition.len(),
            found: maps.len(),
        });
    }
    let mut blocks = Vec::with_capacity(maps.len());
    for (i, comps) in maps.iter().enumerate() {
        let expected = partition.block_size(i);
        if comps.len() != expected {
            return Err(GermError::MapComponents {
                block: i,
                expected,
                found: comps.len(),
            });
        }
        if let Some(component) = comps.iter().position(|f| !f.vanishes_at_origin()) {
            return Err(GermError::MapAtOrigin { block: i, component });
        }
        blocks.push(comps.iter().map(OneForm::differential).collect());
    }
    FormCollection::new(partition.clone(), blocks)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error(transparent)]
    Shape(#[from] GermError),
    #[error(transparent)]
    Basis(#[from] BasisError),
}

/// Scheme-level isolation test: the special-scheme ideal has finite local
/// colength. This certifies an isolated special point; the converse is not
/// claimed.
pub fn is_isolated_special_scheme(germ: &VarietyGerm, collection: &FormCollection) -> Result<bool, SchemeError> {
    let ideal = special_scheme_ideal(germ, collection)?;
    Ok(stdbasis::is_zero_dimensional_local(&ideal)?)
}

/// `left * block` for an invertible constant matrix `left`, the block's
/// forms taken as rows.
pub fn recombine_block(collection: &FormCollection, block: usize, left: &[Vec<Rational>]) -> FormCollection {
    let forms = &collection.blocks[block];
    let n = collection.nvars();
    let mut out = collection.clone();
    out.blocks[block] = left
        .iter()
        .map(|row| {
            row.iter()
                .zip(forms)
                .fold(OneForm::zero(n), |acc, (c, w)| acc.add(&w.times(&Polynomial::constant(n, c.clone()))))
        })
        .collect();
    out
}
