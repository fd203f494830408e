//! Random model documents for round-trip testing of the text format.

use rand_xoshiro::rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use super::*;

/// Seeded generator of syntactically valid documents covering every law,
/// directive and `alpha` scaling form.
pub struct RandomDocuments(Xoshiro256PlusPlus);

impl RandomDocuments {
    pub fn new(seed: u64) -> Self {
        Self(Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    fn below(&mut self, n: u64) -> u64 {
        self.0.next_u64() % n
    }

    fn chance(&mut self, p: f64) -> bool {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64 <= p
    }

    fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        &xs[self.below(xs.len() as u64) as usize]
    }

    fn ident(&mut self, prefix: &str, i: usize) -> String {
        const CHARS: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_";
        let tail: String = (0..self.below(4)).map(|_| *self.pick(CHARS) as char).collect();
        format!("{prefix}{tail}_{i}")
    }

    fn float(&mut self) -> f64 {
        match self.below(5) {
            0 => self.below(1000) as f64,
            1 => {
                let mant = (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
                mant * 10f64.powi(self.below(40) as i32 - 20)
            }
            2 => -(self.below(1_000_000) as f64) / 7.0,
            3 => loop {
                let v = f64::from_bits(self.0.next_u64());
                if v.is_finite() {
                    break v;
                }
            },
            _ => *self.pick(&[0.00167, 1.0 / 3.0, 599.0, 1e-300, 1.5e16, 0.1]),
        }
    }

    fn expr(&mut self) -> Expr {
        let v = self.float();
        match self.below(3) {
            0 => Expr::Number(v),
            1 => Expr::TimesAlpha(v),
            _ => Expr::PerAlpha(v),
        }
    }

    fn arg(&mut self, params: &[ParamDecl]) -> Arg {
        if !params.is_empty() && self.chance(0.5) {
            Arg::Param(self.pick(params).name.clone())
        } else {
            Arg::Value(self.expr())
        }
    }

    fn terms(&mut self, species: &[SpeciesDecl], min: u64) -> Vec<Term> {
        let k = min + self.below(3);
        (0..k).map(|_| Term::new(self.pick(species).name.clone(), 1 + self.below(2) as u32)).collect()
    }

    fn name_opt(&mut self, i: usize) -> Option<String> {
        self.chance(0.3).then(|| self.ident("N", i))
    }

    /// A random, structurally valid document. Directives may reference
    /// reactions whose law does not match, so applying it can fail.
    pub fn document(&mut self) -> ModelDocument {
        let mut doc = ModelDocument::new(self.ident("m", 0));
        if self.chance(0.7) {
            doc.alpha = Some(self.float().abs().max(1e-9));
        }
        doc.species = (0..1 + self.below(6) as usize)
            .map(|i| SpeciesDecl { name: self.ident("S", i), initial: self.0.next_u64() >> self.below(64) })
            .collect();
        doc.params = (0..self.below(5) as usize).map(|i| ParamDecl { name: self.ident("k", i), value: self.expr() }).collect();
        let params = doc.params.clone();
        doc.reactions = (0..self.below(6) as usize)
            .map(|i| ReactionStmt {
                id: self.ident("r", i),
                reactants: self.terms(&doc.species, 0),
                products: self.terms(&doc.species, 0),
                law: match self.below(4) {
                    0 => LawSpec::MassAction(self.arg(&params)),
                    1 => LawSpec::MichaelisMenten { vmax: self.arg(&params), km: self.arg(&params) },
                    2 => LawSpec::Hill { kms: self.arg(&params), j: self.arg(&params), n: self.arg(&params) },
                    _ => LawSpec::Immediate,
                },
            })
            .collect();
        for (i, r) in doc.reactions.clone().iter().enumerate() {
            match self.below(3) {
                0 => doc.directives.push(Directive::UnpackMm {
                    reaction: r.id.clone(),
                    etot: self.arg(&params),
                    rho: self.arg(&params),
                    enzyme: self.name_opt(i),
                }),
                1 => doc.directives.push(Directive::UnpackHill {
                    reaction: r.id.clone(),
                    k1: self.arg(&params),
                    s1: self.arg(&params),
                    s2: self.arg(&params),
                    gene: self.name_opt(i),
                    dimer: self.name_opt(i),
                    complex: self.name_opt(i),
                }),
                _ => {}
            }
        }
        for _ in 0..self.below(3) {
            let terms = self.terms(&doc.species, 1);
            let total = self.arg(&params);
            doc.directives.push(Directive::Conserve { terms, total });
        }
        doc
    }

    /// Canonical text with cosmetic noise: spacing, comments and CRLF line ends.
    pub fn noisy(&mut self, doc: &ModelDocument) -> String {
        let mut out = String::new();
        for line in serialize_model(doc).lines() {
            if self.chance(0.2) {
                out.push_str("# note\n");
            }
            let mut l = " ".repeat(self.below(3) as usize) + line;
            if self.chance(0.5) {
                l = l.replace(" = ", "=").replace(", ", ",");
            }
            if self.chance(0.3) {
                l.push_str("\t# trailing");
            }
            out.push_str(&l);
            out.push_str(if self.chance(0.5) { "\r\n" } else { "\n" });
        }
        out
    }
}
