use std::sync::Arc;

use super::{EmbeddedComplex, IntegralChain};
use crate::error::{Error, Result};

/// Push-forward along a simplicial vertex map `f: V(K) -> V(target)`.
///
/// Images with a repeated vertex are degenerate and contribute zero; other
/// images pick up the parity of their vertex order against the target's
/// stored orientation.
pub fn push_forward(
    t: &IntegralChain,
    target: &Arc<EmbeddedComplex>,
    f: &[usize],
) -> Result<IntegralChain> {
    let k = t.complex();
    if f.len() != k.n_vertices() {
        return Err(Error::InvalidArgument(format!(
            "vertex map has {} entries for {} vertices",
            f.len(),
            k.n_vertices()
        )));
    }
    let mut out = IntegralChain::zero(target.clone(), t.dim());
    for (&p, &c) in t.terms() {
        let image: Vec<usize> = k.simplex((t.dim(), p)).iter().map(|&v| f[v]).collect();
        let mut key = image.clone();
        key.sort_unstable();
        if key.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let (q, sign) = target.find(&image).ok_or(Error::MissingImage(image))?;
        out.add_term(q, sign * c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::AmbientNorm;

    fn tri() -> Arc<EmbeddedComplex> {
        Arc::new(
            EmbeddedComplex::from_simplices(
                vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
                AmbientNorm::Euclidean,
                &[vec![0, 1, 2]],
            )
            .unwrap(),
        )
    }

    #[test]
    fn identity_transposition_and_collapse() {
        let k = tri();
        let t = IntegralChain::simplex(k.clone(), (2, 0), 1).unwrap();
        assert_eq!(push_forward(&t, &k, &[0, 1, 2]).unwrap(), t);
        assert_eq!(push_forward(&t, &k, &[1, 0, 2]).unwrap(), t.neg());
        assert!(push_forward(&t, &k, &[0, 0, 2]).unwrap().is_zero());
        let b = t.boundary().unwrap();
        let collapsed = push_forward(&b, &k, &[0, 0, 2]).unwrap();
        assert_eq!(
            collapsed.boundary().unwrap(),
            push_forward(&b.boundary().unwrap(), &k, &[0, 0, 2]).unwrap()
        );
    }

    #[test]
    fn missing_image() {
        let k = tri();
        let edge = Arc::new(
            EmbeddedComplex::from_simplices(
                vec![vec![0.0], vec![1.0]],
                AmbientNorm::Euclidean,
                &[vec![0, 1]],
            )
            .unwrap(),
        );
        let e = IntegralChain::simplex(edge, (1, 0), 1).unwrap();
        assert!(push_forward(&e, &k, &[0, 1]).is_ok());
        let pt = Arc::new(
            EmbeddedComplex::from_simplices(vec![vec![0.0]; 3], AmbientNorm::Euclidean, &[])
                .unwrap(),
        );
        let t = IntegralChain::simplex(k, (2, 0), 1).unwrap();
        assert!(matches!(
            push_forward(&t, &pt, &[0, 1, 2]),
            Err(Error::MissingImage(_))
        ));
    }
}
