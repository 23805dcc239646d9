//! Orbits of kernels under normalizer generators, with transporters and
//! Schreier generators of stabilizers.

use std::collections::{BTreeMap, HashSet};

use crate::classify::kernel::{F3Index, Kernel};
use crate::error::ClassifyError;
use crate::exact::Matrix;
use crate::IntMat;

#[derive(Clone, Debug)]
pub struct KernelOrbit {
    pub representative: Kernel,
    /// Members with a map sending the representative onto them.
    pub transporters: BTreeMap<Kernel, IntMat>,
    /// Generators of the stabilizer of the representative.
    pub stabilizer: Vec<IntMat>,
}

impl KernelOrbit {
    pub fn contains(&self, k: &Kernel) -> bool {
        self.transporters.contains_key(k)
    }

    pub fn len(&self) -> usize {
        self.transporters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transporters.is_empty()
    }
}

fn image(index: &F3Index, k: &Kernel, m: &IntMat) -> Result<Kernel, ClassifyError> {
    k.image(index, m).ok_or_else(|| {
        ClassifyError::Data(format!(
            "map does not preserve the 3-torsion fixed by zeta on {k}"
        ))
    })
}

/// The orbit of `start` under the group generated by `gens`.
pub fn orbit_from(start: &Kernel, gens: &[IntMat]) -> Result<KernelOrbit, ClassifyError> {
    let index = F3Index::default();
    let mut transporters: BTreeMap<Kernel, IntMat> =
        BTreeMap::from([(start.clone(), Matrix::identity(6))]);
    let mut queue = vec![start.clone()];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head].clone();
        let ux = transporters[&x].clone();
        for s in gens {
            let y = image(&index, &x, s)?;
            if !transporters.contains_key(&y) {
                transporters.insert(y.clone(), s.mul_mat(&ux));
                queue.push(y);
            }
        }
        head += 1;
    }
    // Schreier: u_{sX}^-1 s u_X fixes the start
    let mut seen: HashSet<IntMat> = HashSet::new();
    let mut stabilizer = Vec::new();
    for x in &queue {
        let ux = &transporters[x];
        for s in gens {
            let y = image(&index, x, s)?;
            let uy_inv = transporters[&y].inverse_int().expect("unimodular");
            let g = uy_inv.mul_mat(s).mul_mat(ux);
            if !g.is_identity() && seen.insert(g.clone()) {
                stabilizer.push(g);
            }
        }
    }
    Ok(KernelOrbit {
        representative: start.clone(),
        transporters,
        stabilizer,
    })
}

/// Partition `kernels` into orbits; representatives come from `preferred` when
/// an orbit meets it, otherwise they are the least member.
pub fn kernel_orbits(
    kernels: &[Kernel],
    gens: &[IntMat],
    preferred: &[Kernel],
) -> Result<Vec<KernelOrbit>, ClassifyError> {
    let mut done: HashSet<Kernel> = HashSet::new();
    let mut out = Vec::new();
    for k in kernels {
        if done.contains(k) {
            continue;
        }
        let first = orbit_from(k, gens)?;
        let rep = preferred
            .iter()
            .find(|p| first.contains(p))
            .cloned()
            .unwrap_or_else(|| first.transporters.keys().next().expect("nonempty").clone());
        done.extend(first.transporters.keys().cloned());
        out.push(if rep == *k {
            first
        } else {
            orbit_from(&rep, gens)?
        });
    }
    out.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(out)
}
