use num_traits::Signed;

use super::{Groupoid, Instance};
use crate::circuit::Circuit;
use crate::error::Error;
use crate::lattice::det_exact;
use crate::number::{is_prime, mod_pow};

fn square(name: &str, c: &Circuit, out: &mut Vec<String>) {
    if c.num_inputs() != c.num_outputs() {
        out.push(format!(
            "{name} must map n bits to n bits, has {} inputs and {} outputs",
            c.num_inputs(),
            c.num_outputs()
        ));
    }
    if c.num_inputs() == 0 {
        out.push(format!("{name} has no inputs"));
    }
}

/// Every violated instance invariant, as a human-readable message. Empty means valid.
pub fn validate_instance(inst: &Instance) -> Vec<String> {
    let mut out = Vec::new();
    match inst {
        Instance::Pigeon { circuit }
        | Instance::PrefixCollision { circuit }
        | Instance::Dove { circuit } => square("C", circuit, &mut out),
        Instance::Collision { circuit } => {
            if circuit.num_outputs() >= circuit.num_inputs() {
                out.push(format!(
                    "C must compress: m = {} is not below n = {}",
                    circuit.num_outputs(),
                    circuit.num_inputs()
                ));
            }
        }
        Instance::Claw { sigma0, sigma1 } | Instance::GeneralClaw { sigma0, sigma1, .. } => {
            square("σ0", sigma0, &mut out);
            square("σ1", sigma1, &mut out);
            if sigma0.num_inputs() != sigma1.num_inputs() {
                out.push(format!(
                    "σ0 and σ1 differ in width ({} vs {})",
                    sigma0.num_inputs(),
                    sigma1.num_inputs()
                ));
            }
            if let Instance::GeneralClaw { s, .. } = inst {
                let n = sigma0.num_inputs();
                if *s == 0 || (n < 64 && *s > 1u64 << n) {
                    out.push(format!("s = {s} must lie in [1, 2^{n}]"));
                }
            }
        }
        Instance::DLog(rep) | Instance::Index(rep) => {
            if let Err(e) = Groupoid::new(rep) {
                out.push(match e {
                    Error::Invalid(msgs) => msgs.join("; "),
                    other => format!("f: {other}"),
                });
            }
        }
        Instance::DLogP { p, factors, g, y } => dlogp(*p, factors, *g, *y, &mut out),
        Instance::Blichfeldt {
            basis,
            s,
            v,
            coord_width,
        } => {
            let n = basis.dim();
            if *coord_width == 0 {
                out.push("coordinate width must be positive".into());
            }
            if v.num_outputs() != n * coord_width {
                out.push(format!(
                    "V has {} outputs, expected n·m = {}",
                    v.num_outputs(),
                    n * coord_width
                ));
            }
            let k = v.num_inputs();
            if k < 64 && *s > 1u64 << k {
                out.push(format!("s = {s} exceeds the 2^{k} inputs of V"));
            }
            let det = det_exact(basis).abs();
            if det == 0.into() {
                out.push("basis is singular (det = 0)".into());
            } else if num_bigint::BigInt::from(*s) < det {
                out.push(format!("s = {s} is below |det B| = {det}"));
            }
        }
    }
    out
}

fn dlogp(p: u64, factors: &[(u64, u32)], g: u64, y: u64, out: &mut Vec<String>) {
    if !is_prime(p) {
        out.push(format!("p = {p} is not prime"));
        return;
    }
    let mut product: u128 = 1;
    for (i, &(q, k)) in factors.iter().enumerate() {
        if !is_prime(q) {
            out.push(format!("factor {q} is not prime"));
        }
        if k == 0 {
            out.push(format!("factor {q} has exponent 0"));
        }
        if factors[..i].iter().any(|&(r, _)| r == q) {
            out.push(format!("factor {q} is listed twice"));
        }
        for _ in 0..k {
            product = product.saturating_mul(q as u128);
        }
    }
    if product != (p - 1) as u128 {
        out.push(format!("factors multiply to {product}, not p − 1 = {}", p - 1));
    }
    for (name, v) in [("g", g), ("y", y)] {
        if v == 0 || v >= p {
            out.push(format!("{name} = {v} is not in Z_{p}^*"));
        }
    }
    if g == 0 || g >= p {
        return;
    }
    for &(q, _) in factors {
        if q != 0 && (p - 1).is_multiple_of(q) && mod_pow(g, (p - 1) / q, p) == 1 {
            out.push(format!("g^((p−1)/{q}) = 1 mod {p}, so g is not a generator"));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitBuilder;
    use crate::lattice::IntMatrix;
    use crate::problems::GroupoidRep;

    fn dlogp_inst(p: u64, factors: Vec<(u64, u32)>, g: u64, y: u64) -> Instance {
        Instance::DLogP { p, factors, g, y }
    }

    #[test]
    fn dlogp_examples() {
        assert!(validate_instance(&dlogp_inst(7, vec![(2, 1), (3, 1)], 3, 6)).is_empty());
        let v = validate_instance(&dlogp_inst(7, vec![(2, 1), (3, 1)], 2, 3));
        assert_eq!(v.len(), 1, "{v:?}");
        assert!(v[0].contains("(p−1)/2"));
        assert!(!validate_instance(&dlogp_inst(9, vec![(2, 3)], 2, 1)).is_empty());
        assert!(!validate_instance(&dlogp_inst(7, vec![(6, 1)], 3, 1)).is_empty());
        assert!(!validate_instance(&dlogp_inst(7, vec![(2, 1)], 3, 1)).is_empty());
        assert!(!validate_instance(&dlogp_inst(7, vec![(2, 1), (3, 1)], 3, 0)).is_empty());
        // Z_2^* is trivial and 1 generates it.
        assert!(validate_instance(&dlogp_inst(2, vec![], 1, 1)).is_empty());
    }

    #[test]
    fn blichfeldt_examples() {
        let v = CircuitBuilder::from_truth_table(3, 3, &[0, 1, 2, 3, 4, 5, 6, 7]);
        let ok = Instance::Blichfeldt {
            basis: IntMatrix::scaled_identity(3, 2),
            s: 8,
            v: v.clone(),
            coord_width: 1,
        };
        assert!(validate_instance(&ok).is_empty());
        let small = Instance::Blichfeldt {
            basis: IntMatrix::scaled_identity(3, 2),
            s: 7,
            v: v.clone(),
            coord_width: 1,
        };
        assert_eq!(validate_instance(&small).len(), 1);
        let singular = Instance::Blichfeldt {
            basis: IntMatrix::from_rows(vec![vec![1, 2, 0], vec![2, 4, 0], vec![0, 0, 1]]).unwrap(),
            s: 8,
            v,
            coord_width: 1,
        };
        assert!(validate_instance(&singular)[0].contains("singular"));
    }

    #[test]
    fn circuit_shapes() {
        let sq = CircuitBuilder::from_truth_table(2, 2, &[0, 1, 2, 3]);
        let wide = CircuitBuilder::from_truth_table(2, 1, &[0, 1, 1, 0]);
        assert!(validate_instance(&Instance::Pigeon { circuit: sq.clone() }).is_empty());
        assert!(!validate_instance(&Instance::Pigeon { circuit: wide.clone() }).is_empty());
        assert!(validate_instance(&Instance::Collision { circuit: wide }).is_empty());
        assert!(!validate_instance(&Instance::Collision { circuit: sq.clone() }).is_empty());
        let gc = |s| Instance::GeneralClaw {
            sigma0: sq.clone(),
            sigma1: sq.clone(),
            s,
        };
        assert!(validate_instance(&gc(1)).is_empty());
        assert!(validate_instance(&gc(4)).is_empty());
        assert!(!validate_instance(&gc(0)).is_empty());
        assert!(!validate_instance(&gc(5)).is_empty());
    }

    #[test]
    fn groupoid_widths() {
        let rep = GroupoidRep {
            s: 4,
            f: CircuitBuilder::from_truth_table(4, 2, &[0; 16]),
            id: 0,
            g: 1,
            t: 3,
        };
        assert!(validate_instance(&Instance::DLog(rep.clone())).is_empty());
        let mut bad = rep.clone();
        bad.t = 4;
        assert!(!validate_instance(&Instance::Index(bad)).is_empty());
        let mut bad = rep;
        bad.s = 5;
        assert!(!validate_instance(&Instance::DLog(bad)).is_empty());
    }
}
