use std::fmt;

use itm_numkernel::Mat3;
use itm_renorm::KSeqSpec;
use itm_sim::Word;
use serde::Serialize;

use crate::SadicError;

/// A substitution on {1, 2, 3}, stored by its three images.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct Substitution {
    pub images: [Word; 3],
}

impl Substitution {
    pub fn image(&self, letter: u8) -> &Word {
        &self.images[(letter - 1) as usize]
    }

    pub fn apply(&self, w: &Word) -> Word {
        let mut out = Vec::with_capacity(w.len() * 2);
        for &s in w.symbols() {
            out.extend_from_slice(self.image(s).symbols());
        }
        Word::from_symbols(out).expect("images are valid words")
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        Substitution { images: [0, 1, 2].map(|i| self.apply(&other.images[i])) }
    }

    /// Entry (i, j) counts letter i in the image of j.
    pub fn abelianization(&self) -> Mat3 {
        let mut m = [[0i64; 3]; 3];
        for (j, img) in self.images.iter().enumerate() {
            let c = img.letter_counts();
            for i in 0..3 {
                m[i][j] = c[i] as i64;
            }
        }
        Mat3::from_i64(m)
    }

    /// All three images start with the same letter.
    pub fn is_left_proper(&self) -> bool {
        let first = |w: &Word| w.symbols().first().copied();
        first(&self.images[0]) == first(&self.images[1]) && first(&self.images[1]) == first(&self.images[2])
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.images.iter().enumerate() {
            writeln!(f, "{} -> {}", i + 1, w)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Substitution[{}, {}, {}]", self.images[0], self.images[1], self.images[2])
    }
}

/// χ_k: 1 → 2, 2 → 31^k, 3 → 31^{k−1}.
pub fn chi(k: u64) -> Result<Substitution, SadicError> {
    if k == 0 {
        return Err(SadicError::ZeroIndex);
    }
    let run = |n: u64| {
        let mut v = vec![3u8];
        v.extend(std::iter::repeat_n(1u8, n as usize));
        Word::from_symbols(v).unwrap()
    };
    Ok(Substitution { images: [Word::from_symbols(vec![2]).unwrap(), run(k), run(k - 1)] })
}

/// χ_{k_i} ∘ ⋯ ∘ χ_{k_j} (indices from 1, inclusive).
pub fn compose_chain(spec: &KSeqSpec, i: usize, j: usize) -> Result<Substitution, SadicError> {
    if i == 0 || i > j {
        return Err(SadicError::OutOfRange { i, j });
    }
    let ks = spec.prefix(j).map_err(|_| SadicError::OutOfRange { i, j })?;
    compose_ks(&ks[i - 1..])
}

pub fn compose_ks(ks: &[u64]) -> Result<Substitution, SadicError> {
    let mut it = ks.iter().rev();
    let mut acc = chi(*it.next().ok_or(SadicError::OutOfRange { i: 1, j: 0 })?)?;
    for &k in it {
        acc = chi(k)?.compose(&acc);
    }
    Ok(acc)
}

/// Upper limit on the chain length `rho_prefix` will try.
pub const RHO_MAX_CHAIN: usize = 1 << 16;

/// First `len` letters of ρ = lim χ_{k_1} ∘ ⋯ ∘ χ_{k_n}(3).
pub fn rho_prefix(spec: &KSeqSpec, len: usize) -> Result<Word, SadicError> {
    if len == 0 {
        return Ok(Word::new());
    }
    // lengths[s] = |χ_{k_1} ∘ ⋯ ∘ χ_{k_n}(s)|, grown until letter 3 is long enough
    let mut ks = Vec::new();
    let mut lens = [1u128; 3];
    let mut n = 0;
    while lens[2] < len as u128 {
        n += 1;
        let avail = spec.len().is_none_or(|l| n <= l);
        if !avail || n > RHO_MAX_CHAIN {
            return Err(SadicError::InsufficientGrowth { chain: n - 1, reached: lens[2] as usize, needed: len });
        }
        ks = spec.prefix(n).expect("checked");
        lens = image_lengths(&ks);
    }
    let subs: Vec<Substitution> = ks.iter().map(|&k| chi(k)).collect::<Result<_, _>>()?;
    let mut out = Vec::with_capacity(len);
    expand(&subs, n, 3, len, &mut out);
    Ok(Word::from_symbols(out).expect("valid letters"))
}

/// Lengths of the images of 1, 2, 3 under χ_{k_1} ∘ ⋯ ∘ χ_{k_n}, saturating.
pub fn image_lengths(ks: &[u64]) -> [u128; 3] {
    // row vector (1,1,1) · A_{k_1} ⋯ A_{k_n}
    let mut v = [1u128; 3];
    for &k in ks {
        let k = k as u128;
        v = [v[1], v[0].saturating_mul(k).saturating_add(v[2]), v[0].saturating_mul(k - 1).saturating_add(v[2])];
    }
    v
}

fn expand(subs: &[Substitution], m: usize, letter: u8, len: usize, out: &mut Vec<u8>) {
    if out.len() >= len {
        return;
    }
    if m == 0 {
        out.push(letter);
        return;
    }
    for &t in subs[m - 1].image(letter).symbols() {
        expand(subs, m - 1, t, len, out);
        if out.len() >= len {
            return;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Desubstitution {
    pub preimage: Word,
    /// False when a partial block at either end was dropped.
    pub complete: bool,
}

/// Inverts χ_k on a factor of a χ_k-image by cutting before every 2 and 3:
/// `2` gives 1, `3 1^k` gives 2, `3 1^{k−1}` gives 3. A leading run of 1s
/// is dropped, as is a final `3 1^j` with j < k − 1.
pub fn desubstitute(w: &Word, k: u64) -> Result<Desubstitution, SadicError> {
    if k == 0 {
        return Err(SadicError::ZeroIndex);
    }
    let s = w.symbols();
    let mut complete = true;
    let mut pos = s.iter().position(|&c| c != 1).unwrap_or(s.len());
    if pos > 0 {
        complete = false;
    }
    let mut out = Vec::with_capacity(s.len());
    while pos < s.len() {
        match s[pos] {
            2 => {
                out.push(1);
                pos += 1;
            }
            _ => {
                let run = s[pos + 1..].iter().take_while(|&&c| c == 1).count() as u64;
                let end = pos + 1 + run as usize;
                let at_end = end == s.len();
                if run == k {
                    out.push(2);
                } else if run + 1 == k {
                    out.push(3);
                } else if at_end && run + 1 < k {
                    complete = false;
                } else {
                    return Err(SadicError::Parse { offset: pos, run: run as usize });
                }
                pos = end;
            }
        }
    }
    Ok(Desubstitution { preimage: Word::from_symbols(out).unwrap(), complete })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn chi_images() {
        let c = chi(2).unwrap();
        assert_eq!(c.to_string(), "1 -> 2\n2 -> 311\n3 -> 31\n");
        assert_eq!(chi(1).unwrap().image(3), &w("3"));
        assert_eq!(chi(5).unwrap().abelianization(), itm_numkernel::a_mat(5));
        assert!(chi(0).is_err());
    }

    #[test]
    fn composed_images() {
        let s = compose_ks(&[2, 3]).unwrap();
        assert_eq!(s.images, [w("311"), w("31222"), w("3122")]);
        assert!(s.is_left_proper());
        assert!(!chi(2).unwrap().is_left_proper());
        assert_eq!(compose_ks(&[2, 2, 2]).unwrap().abelianization(), Mat3::from_i64([[1, 5, 3], [2, 1, 1], [1, 3, 2]]));
    }

    #[test]
    fn rho_examples() {
        let c2 = KSeqSpec::constant(2);
        assert_eq!(rho_prefix(&c2, 10).unwrap(), w("3123113122"));
        assert_eq!(rho_prefix(&c2, 3).unwrap(), w("312"));
        assert_eq!(rho_prefix(&"(1,1,4)".parse().unwrap(), 1).unwrap(), w("3"));
        assert!(matches!(
            rho_prefix(&KSeqSpec::Explicit { ks: vec![1, 1] }, 5),
            Err(SadicError::InsufficientGrowth { .. })
        ));
    }

    #[test]
    fn desubstitution_examples() {
        let d = desubstitute(&w("23113122311"), 2).unwrap();
        assert_eq!(d, Desubstitution { preimage: w("123112"), complete: true });
        assert_eq!(desubstitute(&w("3111"), 2), Err(SadicError::Parse { offset: 0, run: 3 }));
        let d = desubstitute(&w("1123"), 3).unwrap();
        assert_eq!(d, Desubstitution { preimage: w("1"), complete: false });
    }
}
