use itm_numkernel::{IBig, Scalar};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::SimError;

/// Parameter pair (α, β). Values outside U are representable; use
/// [`Params::in_u`] / [`Params::in_u_open`] to test membership.
#[derive(Clone, Debug, PartialEq)]
pub struct Params<S> {
    pub alpha: S,
    pub beta: S,
}

impl<S: Scalar> Params<S> {
    pub fn new(alpha: S, beta: S) -> Self {
        Params { alpha, beta }
    }

    /// 0 < β ≤ α ≤ 1.
    pub fn in_u(&self) -> bool {
        let zero = self.alpha.zero_like();
        self.beta > zero && self.beta <= self.alpha && self.alpha <= self.alpha.one_like()
    }

    /// 0 < β < α < 1.
    pub fn in_u_open(&self) -> bool {
        let zero = self.alpha.zero_like();
        self.beta > zero && self.beta < self.alpha && self.alpha < self.alpha.one_like()
    }

    pub fn kind(&self) -> &'static str {
        if self.alpha.is_exact() {
            "exact"
        } else {
            "float"
        }
    }

    /// k = ⌊1/α⌋ and the rescaled first-return parameters
    /// (β/α, (β − 1)/α + k). Floats whose 1/α sits in the guard band
    /// around an integer are refused.
    pub fn renormalized(&self) -> Result<(Params<S>, IBig), SimError> {
        let (a, b) = (&self.alpha, &self.beta);
        let zero = a.zero_like();
        let one = a.one_like();
        if *a <= zero || *a > one {
            return Err(SimError::AlphaOutOfRange(a.describe()));
        }
        let inv = one.clone() / a.clone();
        let k = inv.floor_int();
        if inv.within_guard(&inv.ibig_like(&k)) || inv.within_guard(&inv.ibig_like(&(k.clone() + IBig::ONE))) {
            return Err(SimError::PrecisionExhausted { step: 0 });
        }
        let alpha2 = b.clone() / a.clone();
        let beta2 = (b.clone() - one) / a.clone() + a.ibig_like(&k);
        Ok((Params::new(alpha2, beta2), k))
    }
}

impl<S: Scalar> Serialize for Params<S> {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        let mut st = s.serialize_struct("Params", 4)?;
        st.serialize_field("alpha", &self.alpha.describe())?;
        st.serialize_field("beta", &self.beta.describe())?;
        st.serialize_field("kind", self.kind())?;
        st.serialize_field("precision_bits", &self.alpha.precision_bits())?;
        st.end()
    }
}
