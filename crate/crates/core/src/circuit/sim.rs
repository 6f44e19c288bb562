use super::{prep_unitary, Circuit, Gate, MAX_WIRES};
use crate::linalg::CMatrix;
use crate::state::AmplitudeVector;
use crate::{Error, Result, C64, TOL};

struct Sim {
    total: usize,
    amps: Vec<C64>,
}

impl Sim {
    fn bit(&self, wire: usize) -> usize {
        1 << (self.total - wire)
    }

    fn unitary(&mut self, wires: &[usize], m: &CMatrix, cmask: usize, cval: usize) {
        let bits: Vec<usize> = wires.iter().map(|&w| self.bit(w)).collect();
        let tmask: usize = bits.iter().sum();
        let d = 1 << bits.len();
        let offsets: Vec<usize> = (0..d)
            .map(|l| {
                bits.iter()
                    .enumerate()
                    .filter(|(i, _)| l >> (bits.len() - 1 - i) & 1 == 1)
                    .map(|(_, b)| b)
                    .sum()
            })
            .collect();
        let mut local = vec![C64::new(0.0, 0.0); d];
        for base in 0..self.amps.len() {
            if base & tmask != 0 || base & cmask != cval {
                continue;
            }
            for (l, off) in offsets.iter().enumerate() {
                local[l] = self.amps[base + off];
            }
            for (r, off) in offsets.iter().enumerate() {
                self.amps[base + off] = (0..d).map(|c| m.get(r, c) * local[c]).sum();
            }
        }
    }

    fn run(&mut self, gates: &[Gate], cmask: usize, cval: usize) -> Result<()> {
        for g in gates {
            match g {
                Gate::Prep { qubit, alpha, beta } => {
                    let b = self.bit(*qubit);
                    let weight: f64 = (0..self.amps.len())
                        .filter(|i| i & b != 0 && i & cmask == cval)
                        .map(|i| self.amps[i].norm_sqr())
                        .sum();
                    if weight > TOL {
                        return Err(Error::PrepOnNonzero { qubit: *qubit, weight });
                    }
                    self.unitary(&[*qubit], &prep_unitary(*alpha, *beta), cmask, cval);
                }
                Gate::Unitary { qubits, matrix } => self.unitary(qubits, matrix, cmask, cval),
                Gate::ControlledSub { control, polarity, body } => {
                    let b = self.bit(*control);
                    self.run(body, cmask | b, if *polarity { cval | b } else { cval })?;
                }
                Gate::OrNot { target, register } => {
                    let t = self.bit(*target);
                    let reg: usize = register.iter().map(|&w| self.bit(w)).sum();
                    for i in 0..self.amps.len() {
                        if i & t == 0 && i & reg != 0 && i & cmask == cval {
                            self.amps.swap(i, i | t);
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Applies the circuit to `|0...0>` on all wires.
pub fn simulate(c: &Circuit) -> Result<AmplitudeVector> {
    let total = c.n_wires();
    crate::error::check_qubits("circuit simulation", total, MAX_WIRES)?;
    c.validate()?;
    let mut sim = Sim {
        total,
        amps: vec![C64::new(0.0, 0.0); 1 << total],
    };
    sim.amps[0] = C64::new(1.0, 0.0);
    sim.run(&c.gates, 0, 0)?;
    AmplitudeVector::new(total, sim.amps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x_then(gates: Vec<Gate>, n: usize) -> AmplitudeVector {
        simulate(&Circuit::new(n, 0, gates)).unwrap()
    }

    fn flip(q: usize) -> Gate {
        Gate::Prep {
            qubit: q,
            alpha: C64::new(0.0, 0.0),
            beta: C64::new(1.0, 0.0),
        }
    }

    #[test]
    fn ornot_truth_table() {
        let ornot = Gate::OrNot {
            target: 1,
            register: vec![2, 3],
        };
        let out = x_then(vec![ornot.clone()], 3);
        assert_eq!(out.amps()[0b000], C64::new(1.0, 0.0));
        let out = x_then(vec![flip(2), ornot], 3);
        assert_eq!(out.amps()[0b110], C64::new(1.0, 0.0));
    }

    #[test]
    fn prep_on_one_is_rejected() {
        let r = simulate(&Circuit::new(1, 0, vec![flip(1), flip(1)]));
        assert!(matches!(r, Err(Error::PrepOnNonzero { qubit: 1, .. })));
    }

    #[test]
    fn prep_check_is_restricted_to_control_subspace() {
        // wire 2 is 1 only where wire 1 is 0
        let gates = vec![
            Gate::Unitary {
                qubits: vec![1],
                matrix: CMatrix::hadamard(),
            },
            Gate::ControlledSub {
                control: 1,
                polarity: false,
                body: vec![flip(2)],
            },
            Gate::ControlledSub {
                control: 1,
                polarity: true,
                body: vec![flip(2)],
            },
        ];
        let out = x_then(gates, 2);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((out.amps()[0b01].re - h).abs() < 1e-12);
        assert!((out.amps()[0b11].re - h).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_wires() {
        let c = Circuit::new(
            2,
            0,
            vec![Gate::ControlledSub {
                control: 1,
                polarity: true,
                body: vec![flip(1)],
            }],
        );
        assert!(matches!(simulate(&c), Err(Error::InvalidQubits(_))));
        assert!(simulate(&Circuit::new(2, 0, vec![flip(3)])).is_err());
        assert!(matches!(simulate(&Circuit::new(21, 0, vec![])), Err(Error::Oversize { .. })));
    }
}
