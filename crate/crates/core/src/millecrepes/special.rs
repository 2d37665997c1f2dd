use serde::Serialize;

use crate::error::{Error, Result};
use crate::grassmann::{IndexTuple, Params};

/// The index families I_k, I*_k, I^k_{μν}, I^{k*}_{μν} attached to the standard
/// upper chart τ = ((p, …, 1), (s, …, s−p+1)).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialIndices {
    pub ik: IndexTuple,
    pub ik_star: Option<IndexTuple>,
    pub mu_nu: Vec<(usize, usize, IndexTuple)>,
    pub star_mu_nu: Vec<(usize, usize, IndexTuple)>,
}

pub fn special_indices(par: &Params, k: usize) -> Result<SpecialIndices> {
    let (s, p, n) = (par.s(), par.p(), par.n());
    let hi = p.min(n - s);
    if k > hi || s < p {
        return Err(Error::Range { what: "k", value: k as i64, lo: 0, hi: hi as i64 });
    }
    let ik_entries: Vec<usize> = (s + k + 1 - p..=s + k).rev().collect();
    let ik = IndexTuple::from_set(ik_entries.clone());
    let ik_star = (k >= 1 && k < p && s + k < n && s + k > p).then(|| {
        let mut e: Vec<usize> = ik_entries.iter().copied().filter(|&i| i != s + k && i != s + k + 1 - p).collect();
        e.push(s + k + 1);
        e.push(s + k - p);
        IndexTuple::from_set(e)
    });
    let swap = |mu: usize, nu: usize| {
        let mut e: Vec<usize> = ik_entries.iter().copied().filter(|&i| i != mu).collect();
        e.push(nu);
        IndexTuple::from_set(e)
    };
    let mut mu_nu = Vec::new();
    for mu in s + k + 1 - p..=s {
        for nu in 1..=s + k - p {
            mu_nu.push((mu, nu, swap(mu, nu)));
        }
    }
    let mut star_mu_nu = Vec::new();
    for mu in s + 1..=s + k {
        for nu in s + k + 1..=n {
            star_mu_nu.push((mu, nu, swap(mu, nu)));
        }
    }
    Ok(SpecialIndices { ik, ik_star, mu_nu, star_mu_nu })
}
