use crate::{Error, Result, C64};

/// Dense amplitudes indexed by basis index, qubit 1 most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeVector {
    n: usize,
    amps: Vec<C64>,
}

impl AmplitudeVector {
    pub fn new(n: usize, amps: Vec<C64>) -> Result<Self> {
        if n >= usize::BITS as usize || amps.len() != 1usize << n {
            return Err(Error::Dimension(format!(
                "{} amplitudes for {n} qubits",
                amps.len()
            )));
        }
        Ok(AmplitudeVector { n, amps })
    }

    pub fn from_real(n: usize, amps: &[f64]) -> Result<Self> {
        Self::new(n, amps.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zero(n: usize) -> Self {
        AmplitudeVector {
            n,
            amps: vec![C64::new(0.0, 0.0); 1 << n],
        }
    }

    pub fn basis(n: usize, index: usize) -> Self {
        let mut v = Self::zero(n);
        v.amps[index] = C64::new(1.0, 0.0);
        v
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amps(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.same_dim(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroFunction);
        }
        Ok(AmplitudeVector {
            n: self.n,
            amps: self.amps.iter().map(|a| a / norm).collect(),
        })
    }

    /// `self ⊗ other`, with `self` on the leading qubits.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        AmplitudeVector {
            n: self.n + other.n,
            amps,
        }
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "vectors on {} and {} qubits",
                self.n, other.n
            )));
        }
        Ok(())
    }

    /// One `BITSTRING RE IM` line per basis state.
    pub fn to_text(&self, omit_zeros: bool) -> String {
        let mut out = String::new();
        for (i, a) in self.amps.iter().enumerate() {
            let (re, im) = (format_fixed(a.re), format_fixed(a.im));
            if omit_zeros && re == "0" && im == "0" {
                continue;
            }
            out.push_str(&bitstring(i, self.n));
            out.push(' ');
            out.push_str(&re);
            out.push(' ');
            out.push_str(&im);
            out.push('\n');
        }
        out
    }

    /// Reads the `to_text` format; unlisted basis states are zero.
    pub fn from_text(src: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut n = None;
        for (li, line) in src.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| Error::Syntax {
                line: li + 1,
                col: 1,
                msg: msg.to_string(),
            };
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(err("expected BITSTRING RE IM"));
            }
            let bits = parts[0];
            if bits.is_empty() || !bits.bytes().all(|b| b == b'0' || b == b'1') || bits.len() > 30 {
                return Err(err("bad bitstring"));
            }
            if *n.get_or_insert(bits.len()) != bits.len() {
                return Err(err("bitstrings of different lengths"));
            }
            let idx = usize::from_str_radix(bits, 2).map_err(|_| err("bad bitstring"))?;
            let re: f64 = parts[1].parse().map_err(|_| err("bad real part"))?;
            let im: f64 = parts[2].parse().map_err(|_| err("bad imaginary part"))?;
            entries.push((idx, C64::new(re, im)));
        }
        let n = n.ok_or_else(|| Error::Syntax {
            line: 1,
            col: 1,
            msg: "no amplitudes".into(),
        })?;
        let mut v = Self::zero(n);
        for (i, a) in entries {
            v.amps[i] = a;
        }
        Ok(v)
    }
}

pub(crate) fn bitstring(i: usize, n: usize) -> String {
    (0..n)
        .map(|k| if i >> (n - 1 - k) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Rounded to 12 decimals, trailing zeros trimmed, no negative zero.
pub(crate) fn format_fixed(x: f64) -> String {
    let mut s = format!("{:.12}", x);
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// `|<a|b>|^2 / (|a|^2 |b|^2)`.
pub fn fidelity(a: &AmplitudeVector, b: &AmplitudeVector) -> Result<f64> {
    let ip = a.inner(b)?;
    let d = a.norm_sqr() * b.norm_sqr();
    if d == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(ip.norm_sqr() / d)
}

/// `||a - b||^2`.
pub fn l2_distance2(a: &AmplitudeVector, b: &AmplitudeVector) -> Result<f64> {
    a.same_dim(b)?;
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| (x - y).norm_sqr()).sum())
}

/// Squared distance reachable by a phase-optimal approximation at fidelity
/// `1 - eps`: `2 - 2 sqrt(1 - eps)`.
pub fn eps_to_delta(eps: f64) -> f64 {
    2.0 - 2.0 * (1.0 - eps).sqrt()
}
