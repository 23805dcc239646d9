//! Cyclic quotient singularities `1/d(w1,w2,w3)`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::SingularError;
use crate::Rational;

/// A cyclic quotient singularity type with normalized weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CqsType {
    pub order: u32,
    pub weights: [u32; 3],
}

fn permutations(w: [u32; 3]) -> [[u32; 3]; 6] {
    let [a, b, c] = w;
    [
        [a, b, c],
        [a, c, b],
        [b, a, c],
        [b, c, a],
        [c, a, b],
        [c, b, a],
    ]
}

impl CqsType {
    /// Normalizes over generator powers coprime to `d` and coordinate order:
    /// the lexicographically least tuple whose first weight is 1.
    pub fn new(order: u32, weights: [u32; 3]) -> Result<Self, SingularError> {
        let d = order;
        let w = weights.map(|x| x % d);
        if d < 2 || w.iter().any(|x| x.gcd(&d) != 1) {
            return Err(SingularError::NotIsolated(w.to_vec(), d));
        }
        let best = (1..d)
            .filter(|k| k.gcd(&d) == 1)
            .flat_map(|k| permutations(w.map(|x| (x * k) % d)))
            .filter(|t| t[0] == 1)
            .min()
            .expect("some power sends a weight to 1");
        Ok(CqsType {
            order: d,
            weights: best,
        })
    }

    pub fn label(&self) -> String {
        let [a, b, c] = self.weights;
        format!("1/{}({a},{b},{c})", self.order)
    }

    /// Key used in serialized baskets, `d/(a,b,c)`.
    pub fn basket_key(&self) -> String {
        let [a, b, c] = self.weights;
        format!("{}/({a},{b},{c})", self.order)
    }

    pub fn age(&self, k: u32) -> Rational {
        let s: u32 = self.weights.iter().map(|w| (w * k) % self.order).sum();
        Rational::new(s as i64, self.order as i64)
    }
}

impl fmt::Display for CqsType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CqsClass {
    pub canonical: bool,
    pub terminal: bool,
    pub gorenstein: bool,
    pub morrison_label: Option<String>,
}

/// Reid–Tai ages, Gorenstein test and position in Morrison's list.
pub fn classify_cqs(order: u32, weights: [u32; 3]) -> Result<CqsClass, SingularError> {
    let t = CqsType::new(order, weights)?;
    let d = t.order;
    let one = Rational::from_integer(1);
    let ages: Vec<Rational> = (1..d).map(|k| t.age(k)).collect();
    let canonical = ages.iter().all(|a| *a >= one);
    let terminal = ages.iter().all(|a| *a > one);
    let gorenstein = t.weights.iter().sum::<u32>() % d == 0;
    let morrison_label = canonical.then(|| morrison(&t)).flatten();
    Ok(CqsClass {
        canonical,
        terminal,
        gorenstein,
        morrison_label,
    })
}

fn morrison(t: &CqsType) -> Option<String> {
    let d = t.order;
    let forms: Vec<[u32; 3]> = (1..d)
        .filter(|k| k.gcd(&d) == 1)
        .flat_map(|k| permutations(t.weights.map(|x| (x * k) % d)))
        .filter(|w| w[0] == 1)
        .collect();
    if let Some(w) = forms.iter().filter(|w| (w[1] + w[2]) % d == 0).min() {
        return Some(format!("1/{d}(1,{},{}) terminal", w[1], w[2]));
    }
    if let Some(w) = forms.iter().filter(|w| (1 + w[1] + w[2]) % d == 0).min() {
        return Some(format!("1/{d}(1,{},{}) Gorenstein", w[1], w[2]));
    }
    match (d, t.weights) {
        (9, [1, 4, 7]) | (14, [1, 9, 11]) => Some(format!("{} exceptional", t.label())),
        _ => None,
    }
}

/// The six counters `[N2, N3, N4, N6, N9, N14]` of the Riemann–Roch identity.
pub type RrVector = [u32; 6];

pub fn riemann_roch_value(n: &RrVector) -> Rational {
    let coef = [
        Rational::new(1, 16),
        Rational::new(1, 9),
        Rational::new(5, 32),
        Rational::new(35, 144),
        Rational::new(1, 3),
        Rational::new(7, 16),
    ];
    n.iter()
        .zip(coef)
        .map(|(x, c)| c * Rational::from_integer(*x as i64))
        .sum()
}

/// All nonnegative solutions of the Riemann–Roch identity, lexicographically sorted.
pub fn riemann_roch_baskets() -> Vec<RrVector> {
    let one = Rational::from_integer(1);
    let mut out = Vec::new();
    for n2 in 0..=16 {
        for n3 in 0..=9 {
            for n4 in 0..=6 {
                for n6 in 0..=4 {
                    for n9 in 0..=3 {
                        for n14 in 0..=2 {
                            let v = [n2, n3, n4, n6, n9, n14];
                            if riemann_roch_value(&v) == one {
                                out.push(v);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}
