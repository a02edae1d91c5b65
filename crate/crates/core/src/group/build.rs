use serde::{Deserialize, Serialize};

use super::{GroupError, GroupTable, Permutation, TABLE_CAP};

/// A finite description of a group, materialized by [`build_group`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params")]
pub enum PresentationSpec {
    /// `Z/n`.
    #[serde(rename = "cyclic")]
    Cyclic { n: usize },
    #[serde(rename = "direct-product")]
    DirectProduct { factors: Vec<PresentationSpec> },
    /// `⟨A, t | t^(2^q) = a0, t a t⁻¹ = a^(1+2^s)⟩` with
    /// `A = Z/2^e1 × … × Z/2^er`; `a0` is given in coordinates.
    #[serde(rename = "iwasawa-Z")]
    IwasawaZ {
        a_exponents: Vec<u32>,
        s: u32,
        q: u32,
        a0: Vec<u64>,
    },
    /// `M(2^n) = ⟨σ, τ | σ^(2^(n-1)) = 1 = τ², τστ = σ^(1+2^(n-2))⟩`.
    #[serde(rename = "modular-M2n")]
    ModularM2n { n: u32 },
    /// Dihedral group of the given order (`D8` has order 8).
    #[serde(rename = "dihedral")]
    Dihedral { order: usize },
    /// Generalized quaternion (dicyclic) group of the given order.
    #[serde(rename = "quaternion")]
    Quaternion { order: usize },
    #[serde(rename = "semidihedral")]
    Semidihedral { order: usize },
    /// Permutations of `0..degree` given by image lists.
    #[serde(rename = "permutation-generated")]
    PermutationGenerated {
        degree: usize,
        generators: Vec<Vec<usize>>,
    },
    #[serde(rename = "cayley-json")]
    CayleyJson {
        mult: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
}

impl PresentationSpec {
    /// The order the constructor will produce, when it can be read off the
    /// parameters.
    pub fn predicted_order(&self) -> Option<usize> {
        use PresentationSpec::*;
        match self {
            Cyclic { n } => Some(*n),
            DirectProduct { factors } => factors
                .iter()
                .map(|f| f.predicted_order())
                .try_fold(1usize, |acc, o| acc.checked_mul(o?)),
            IwasawaZ { a_exponents, q, .. } => {
                let bits: u32 = a_exponents.iter().sum::<u32>() + q;
                1usize.checked_shl(bits)
            }
            ModularM2n { n } => 1usize.checked_shl(*n),
            Dihedral { order } | Quaternion { order } | Semidihedral { order } => Some(*order),
            PermutationGenerated { .. } => None,
            CayleyJson { mult, .. } => Some(mult.len()),
        }
    }
}

fn invalid(msg: impl Into<String>) -> GroupError {
    GroupError::InvalidPresentation(msg.into())
}

fn pow_mod(base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    let mut b = base % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn power_label(name: &str, k: u64) -> Option<String> {
    match k {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{name}^{k}")),
    }
}

/// Elements `a t^j` with `a ∈ A = ⊕ Z/m_i`, `0 ≤ j < t_order`, where `t`
/// acts on `A` by multiplication by the scalar `c` and `t^t_order = w ∈ A`.
fn scalar_extension(
    moduli: &[u64],
    a_names: &[String],
    t_name: &str,
    c: u64,
    t_order: u64,
    w: &[u64],
) -> Result<GroupTable, GroupError> {
    if w.len() != moduli.len() {
        return Err(invalid("coordinate vector length does not match A"));
    }
    for (&m, &wi) in moduli.iter().zip(w) {
        if m == 0 || wi >= m {
            return Err(invalid("coordinate out of range"));
        }
        if num_integer::gcd(c % m, m) != 1 && m > 1 {
            return Err(invalid(format!("action scalar {c} is not a unit modulo {m}")));
        }
        if pow_mod(c, t_order, m) != 1 % m {
            return Err(invalid(format!(
                "t^{t_order} must centralize A, but {c}^{t_order} != 1 mod {m}"
            )));
        }
        if (c % m) * wi % m != wi {
            return Err(invalid("t^order element must commute with t"));
        }
    }
    let a_size: u64 = moduli.iter().product();
    let order = a_size
        .checked_mul(t_order)
        .filter(|&o| o as usize <= TABLE_CAP)
        .ok_or(GroupError::OrderCapExceeded {
            order: (a_size as usize).saturating_mul(t_order as usize),
            cap: TABLE_CAP,
        })? as usize;

    let decode = |idx: usize| -> (Vec<u64>, u64) {
        let j = idx as u64 / a_size;
        let mut rest = idx as u64 % a_size;
        let coords = moduli
            .iter()
            .map(|&m| {
                let x = rest % m;
                rest /= m;
                x
            })
            .collect();
        (coords, j)
    };
    let encode = |coords: &[u64], j: u64| -> usize {
        let mut idx = 0u64;
        for (x, &m) in coords.iter().zip(moduli).rev() {
            idx = idx * m + x;
        }
        (j * a_size + idx) as usize
    };
    let c_pows: Vec<Vec<u64>> = (0..t_order)
        .map(|j| moduli.iter().map(|&m| pow_mod(c, j, m)).collect())
        .collect();
    let decoded: Vec<(Vec<u64>, u64)> = (0..order).map(decode).collect();
    let labels = decoded
        .iter()
        .map(|(coords, j)| {
            let parts: Vec<String> = coords
                .iter()
                .zip(a_names)
                .filter_map(|(&x, n)| power_label(n, x))
                .chain(power_label(t_name, *j))
                .collect();
            if parts.is_empty() {
                "1".to_string()
            } else {
                parts.join(" ")
            }
        })
        .collect();
    GroupTable::from_fn(
        order,
        |x, y| {
            let (a, j) = &decoded[x];
            let (b, l) = &decoded[y];
            let wrap = j + l >= t_order;
            let coords: Vec<u64> = moduli
                .iter()
                .enumerate()
                .map(|(i, &m)| {
                    let mut v = (a[i] + c_pows[*j as usize][i] * b[i]) % m;
                    if wrap {
                        v = (v + w[i]) % m;
                    }
                    v
                })
                .collect();
            encode(&coords, (j + l) % t_order)
        },
        Some(labels),
    )
}

fn two_power_exponent(order: usize, what: &str, min_exp: u32) -> Result<u32, GroupError> {
    if !order.is_power_of_two() || order.trailing_zeros() < min_exp {
        return Err(invalid(format!(
            "{what} requires order 2^k with k >= {min_exp}, got {order}"
        )));
    }
    Ok(order.trailing_zeros())
}

/// Materializes a presentation as a validated Cayley table.
pub fn build_group(spec: &PresentationSpec) -> Result<GroupTable, GroupError> {
    use PresentationSpec::*;
    if let Some(order) = spec.predicted_order() {
        if order > TABLE_CAP {
            return Err(GroupError::OrderCapExceeded { order, cap: TABLE_CAP });
        }
    }
    let one = |s: &str| vec![s.to_string()];
    match spec {
        Cyclic { n } => {
            if *n == 0 {
                return Err(invalid("cyclic group of order 0"));
            }
            scalar_extension(&[*n as u64], &one("g"), "", 1, 1, &[0])
        }
        Dihedral { order } => {
            if *order < 2 || order % 2 != 0 {
                return Err(invalid("dihedral group needs even order"));
            }
            let m = (*order / 2) as u64;
            scalar_extension(&[m], &one("r"), "s", m - 1, 2, &[0])
        }
        Quaternion { order } => {
            if *order < 8 || order % 4 != 0 {
                return Err(invalid("quaternion group needs order divisible by 4, at least 8"));
            }
            let m = (*order / 4) as u64;
            scalar_extension(&[2 * m], &one("x"), "y", 2 * m - 1, 2, &[m])
        }
        Semidihedral { order } => {
            let k = two_power_exponent(*order, "semidihedral group", 4)?;
            scalar_extension(&[1 << (k - 1)], &one("x"), "y", (1 << (k - 2)) - 1, 2, &[0])
        }
        ModularM2n { n } => {
            if *n < 3 {
                return Err(invalid("M(2^n) requires n >= 3"));
            }
            scalar_extension(&[1 << (n - 1)], &one("σ"), "τ", 1 + (1 << (n - 2)), 2, &[0])
        }
        IwasawaZ { a_exponents, s, q, a0 } => {
            if a_exponents.is_empty() || a_exponents.contains(&0) {
                return Err(invalid("A must be a nontrivial product of cyclic 2-groups"));
            }
            if *s == 0 || *s > 30 {
                return Err(invalid("level s must satisfy 1 <= s <= 30"));
            }
            let moduli: Vec<u64> = a_exponents.iter().map(|&e| 1u64 << e).collect();
            for (&x, &m) in a0.iter().zip(&moduli) {
                if x % m * (1u64 << s.min(&63)) % m != 0 {
                    return Err(invalid("a0^(2^s) must be trivial in A"));
                }
            }
            let names: Vec<String> = if moduli.len() == 1 {
                one("a")
            } else {
                (1..=moduli.len()).map(|i| format!("a{i}")).collect()
            };
            let g = scalar_extension(&moduli, &names, "t", 1 + (1u64 << s), 1u64 << q, a0)?;
            debug_assert_eq!(g.order(), spec.predicted_order().unwrap());
            Ok(g)
        }
        DirectProduct { factors } => {
            let tables: Vec<GroupTable> =
                factors.iter().map(build_group).collect::<Result<_, _>>()?;
            direct_product(&tables)
        }
        PermutationGenerated { degree, generators } => {
            let gens: Vec<Permutation> = generators
                .iter()
                .map(|g| {
                    if g.len() != *degree {
                        Err(invalid("generator length differs from degree"))
                    } else {
                        Permutation::new(g.clone())
                    }
                })
                .collect::<Result<_, _>>()?;
            Permutation::generate_table(*degree, &gens)
        }
        CayleyJson { mult, labels } => GroupTable::from_rows(mult, labels.clone()),
    }
}

fn direct_product(tables: &[GroupTable]) -> Result<GroupTable, GroupError> {
    let order = tables
        .iter()
        .try_fold(1usize, |acc, t| acc.checked_mul(t.order()))
        .filter(|&o| o <= TABLE_CAP)
        .ok_or(GroupError::OrderCapExceeded { order: usize::MAX, cap: TABLE_CAP })?;
    let decode = |mut idx: usize| -> Vec<usize> {
        tables
            .iter()
            .map(|t| {
                let x = idx % t.order();
                idx /= t.order();
                x
            })
            .collect()
    };
    let encode = |coords: &[usize]| -> usize {
        coords
            .iter()
            .zip(tables)
            .rev()
            .fold(0, |acc, (&x, t)| acc * t.order() + x)
    };
    let decoded: Vec<Vec<usize>> = (0..order).map(decode).collect();
    let labels = decoded
        .iter()
        .map(|c| {
            let parts: Vec<String> = c.iter().zip(tables).map(|(&x, t)| t.label(x)).collect();
            format!("({})", parts.join(", "))
        })
        .collect();
    GroupTable::from_fn(
        order,
        |x, y| {
            let coords: Vec<usize> = decoded[x]
                .iter()
                .zip(&decoded[y])
                .zip(tables)
                .map(|((&a, &b), t)| t.mul(a, b))
                .collect();
            encode(&coords)
        },
        Some(labels),
    )
}
