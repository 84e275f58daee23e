//! The hyperoctahedral symmetry group of `Q^n` and canonical forms of complexes under it.

use sha2::{Digest, Sha256};

use crate::cell::CellCode;
use crate::complex::CubicalComplex;

/// A symmetry of the cube: reflect the coordinates in `flips`, then move coordinate `i`
/// to position `perm[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeSymmetry {
    perm: Vec<usize>,
    flips: u8,
}

impl CubeSymmetry {
    pub fn new(perm: Vec<usize>, flips: u8) -> Self {
        debug_assert!({
            let mut p = perm.clone();
            p.sort_unstable();
            p.iter().enumerate().all(|(i, &x)| i == x)
        });
        CubeSymmetry { perm, flips }
    }

    pub fn identity(n: usize) -> Self {
        CubeSymmetry::new((0..n).collect(), 0)
    }

    pub fn apply(&self, cell: &CellCode) -> CellCode {
        let n = cell.ambient_dim();
        let (mut stars, mut ones) = (0u8, 0u8);
        let reflected = (cell.ones_mask() ^ self.flips) & !cell.star_mask();
        for (i, &to) in self.perm.iter().enumerate().take(n) {
            stars |= (cell.star_mask() >> i & 1) << to;
            ones |= (reflected >> i & 1) << to;
        }
        CellCode::from_masks(n, stars, ones).expect("same ambient dimension")
    }

    /// All `2^n * n!` symmetries.
    pub fn all(n: usize) -> Vec<CubeSymmetry> {
        let mut perms = Vec::new();
        permutations(&mut (0..n).collect::<Vec<_>>(), 0, &mut perms);
        let mut out = Vec::with_capacity(perms.len() << n);
        for p in perms {
            for flips in 0..(1u16 << n) {
                out.push(CubeSymmetry::new(p.clone(), flips as u8));
            }
        }
        out
    }
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

/// Lexicographically least sorted face list over the whole symmetry group.
pub fn canonical_faces(faces: &[CellCode], group: &[CubeSymmetry]) -> Vec<CellCode> {
    let mut best: Option<Vec<CellCode>> = None;
    let mut image = Vec::with_capacity(faces.len());
    for g in group {
        image.clear();
        image.extend(faces.iter().map(|f| g.apply(f)));
        image.sort_unstable();
        if best.as_ref().is_none_or(|b| image < *b) {
            best = Some(image.clone());
        }
    }
    best.unwrap_or_default()
}

/// Canonical form rendered as space-separated star words. Two complexes have equal
/// signatures exactly when a cube symmetry maps one onto the other.
pub fn canonical_signature(complex: &CubicalComplex) -> String {
    let group = CubeSymmetry::all(complex.ambient_dim());
    signature_with_group(complex.faces(), &group)
}

pub fn signature_with_group(faces: &[CellCode], group: &[CubeSymmetry]) -> String {
    canonical_faces(faces, group)
        .iter()
        .map(CellCode::word)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Short stable digest of a signature for manifests.
pub fn signature_hash(signature: &str) -> String {
    hex::encode(&Sha256::digest(signature.as_bytes())[..8])
}
