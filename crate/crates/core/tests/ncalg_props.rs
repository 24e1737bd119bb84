use faer::{c64, Mat};
use nctorus::ncalg::{canonical_word, parse_word, Base, Coeff, DWord, Factor, NCPoly, Word, WordDisplay};
use nctorus::speclab::{Block, KCalc, Theta, TorusRep};
use num_rational::Rational64;
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = Coeff> {
    (-20i64..=20, 1i64..=12, 0i32..=2).prop_map(|(n, d, h)| Coeff::new(Rational64::new(n, d), h))
}

fn dword() -> impl Strategy<Value = DWord> {
    (prop::collection::vec(1u8..=3, 1..=2), prop::bool::ANY)
        .prop_map(|(d, inv)| DWord::new(if inv { Base::KInv } else { Base::K }, &d))
}

fn factor(decorated: bool) -> impl Strategy<Value = Factor> {
    let s = if decorated { -6i32..=6 } else { 0i32..=0 };
    prop_oneof![
        (-3i32..=3).prop_filter("nonzero", |m| *m != 0).prop_map(Factor::KPow),
        (s, dword()).prop_map(|(s, w)| Factor::modular(s, w)),
    ]
}

fn word(decorated: bool) -> impl Strategy<Value = Word> {
    prop::collection::vec(factor(decorated), 1..=4).prop_map(canonical_word)
}

fn poly(decorated: bool) -> impl Strategy<Value = NCPoly> {
    let rational = (-20i64..=20, 1i64..=12).prop_map(|(n, d)| Coeff::frac(n, d));
    prop::collection::vec((rational, word(decorated)), 1..=3).prop_map(|ts| {
        let mut p = NCPoly::zero();
        for (c, w) in ts {
            p.add_term(c, w);
        }
        p
    })
}

struct Model {
    kc: KCalc,
    block: Block,
}

impl Model {
    fn new() -> Self {
        let h = "0.3:cos(1,0,0);0.2:sin(0,1,0)".parse().unwrap();
        let rep = TorusRep::new(Theta([0.3817, 0.0, 0.0]), 4, h).unwrap();
        let block = rep.unit_block();
        Model { kc: KCalc::new(&block).unwrap(), block }
    }

    fn delta(&self, j: u8, x: &Mat<c64>) -> Mat<c64> {
        let d = self.block.grading(j as usize - 1);
        &d * x - x * &d
    }

    fn factor(&self, f: &Factor) -> Mat<c64> {
        match f {
            Factor::KPow(m) => self.kc.kpow(f64::from(*m)),
            Factor::Mod { sixths, word } => {
                let mut x = self.kc.kpow(if word.base == Base::K { 1.0 } else { -1.0 });
                for &j in word.derivs() {
                    x = self.delta(j, &x);
                }
                let s = f64::from(*sixths);
                self.kc.kpow(-s) * x * self.kc.kpow(s)
            }
        }
    }

    fn eval(&self, p: &NCPoly) -> Mat<c64> {
        let n = self.block.len();
        let mut out = Mat::<c64>::zeros(n, n);
        for (w, c) in p.terms() {
            let mut m = Mat::<c64>::identity(n, n);
            for f in w {
                m = &m * self.factor(f);
            }
            out += m * faer::Scale(c64::new(c.to_f64(), 0.0));
        }
        out
    }
}

fn close(a: &Mat<c64>, b: &Mat<c64>) -> bool {
    (a - b).norm_l2() <= 1e-9 * (1.0 + a.norm_l2().max(b.norm_l2()))
}

thread_local! {
    static MODEL: Model = Model::new();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coeff_ring_laws(a in coeff(), b in coeff(), c in coeff()) {
        if a.pi_half() == b.pi_half() && b.pi_half() == c.pi_half() {
            prop_assert_eq!((a + b) + c, a + (b + c));
            prop_assert_eq!(a * (b + c), a * b + a * c);
        }
        prop_assert_eq!(a * b, b * a);
        if !a.is_zero() {
            prop_assert_eq!(a * a.inv(), Coeff::one());
        }
        prop_assert_eq!(a.to_string().parse::<Coeff>().unwrap(), a);
    }

    #[test]
    fn word_text_round_trip(w in word(true)) {
        let text = WordDisplay(&w).to_string();
        prop_assert_eq!(parse_word(&text).unwrap(), w);
    }

    #[test]
    fn normal_order_is_a_projection(p in poly(true)) {
        let q = p.normal_order();
        prop_assert!(q.is_normal_ordered());
        prop_assert_eq!(q.normal_order(), q.clone());
        prop_assert_eq!(q.commutative_image(), p.commutative_image());
    }

    #[test]
    fn delta_is_a_derivation(a in poly(false), b in poly(false), j in 1u8..=3) {
        let lhs = (&a * &b).apply_delta(j).unwrap();
        let rhs = &(&a.apply_delta(j).unwrap() * &b) + &(&a * &b.apply_delta(j).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn modular_shifts_compose(p in poly(true), s in -6i32..=6, t in -6i32..=6) {
        prop_assert_eq!(p.apply_modular(s).apply_modular(t), p.apply_modular(s + t));
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rewrites_hold_as_matrices(p in poly(true), u in poly(false), j in 1u8..=3) {
        MODEL.with(|m| {
            let a = m.eval(&p);
            prop_assert!(close(&a, &m.eval(&p.normal_order())));
            prop_assert!(close(&m.delta(j, &m.eval(&u)), &m.eval(&u.apply_delta(j).unwrap())));
            Ok(())
        })?;
    }
}
