use crate::certify::Hypotheses;
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::func::{Family, ShiftVariant};
use crate::seminorm::{BoundedSetGen, SeminormTag, SeqProfile, WeightFn};
use crate::verdict::Verdicts;

use super::{FunctionSet, ScenarioSpec, SemigroupSpec};

const DIAGONAL_J: usize = 200;
const SHIFT_J: usize = 100;
const FUNCTION_J: usize = 20;
const HEAT_H_J: usize = 20;

fn hyp(barrelled: bool, mackey_complete: bool, baire: bool, montel: bool, exponentially_bounded: bool) -> Hypotheses {
    Hypotheses { barrelled, mackey_complete, baire, montel, exponentially_bounded }
}

const FRECHET: fn(bool) -> Hypotheses = |montel| hyp(true, true, true, montel, true);

fn scenario(name: &str, reference: &str, description: &str, code: &str, semigroup: SemigroupSpec, hypotheses: Hypotheses, truncation: usize) -> ScenarioSpec {
    ScenarioSpec {
        name: name.into(),
        reference: Some(reference.into()),
        description: description.into(),
        semigroup,
        hypotheses,
        expected: Some(Verdicts::from_code(code).expect("registry codes are seven letters")),
        truncation,
        t_max: None,
    }
}

fn tent(c: f64) -> Family {
    Family::Tent { c, w: 0.5, height: 1.0 }
}

fn gauss(c: f64) -> Family {
    Family::GaussPoly { coeffs: vec![1.0], a: 1.0, c }
}

fn schwartz_set() -> FunctionSet {
    FunctionSet::Members {
        label: "gauss-family".into(),
        members: vec![gauss(0.0), gauss(1.0), gauss(-2.0), Family::GaussPoly { coeffs: vec![0.0, 1.0], a: 0.5, c: 0.0 }],
    }
}

fn schwartz_points() -> Vec<Family> {
    vec![gauss(0.0), Family::GaussPoly { coeffs: vec![1.0, 0.0, 1.0], a: 0.5, c: 1.0 }]
}

fn schwartz_norms() -> Vec<SeminormTag> {
    (0..=2).map(SeminormTag::SchwartzN).collect()
}

fn levels() -> Vec<SeminormTag> {
    (1..=5).map(SeminormTag::KotheSup).collect()
}

fn diag(space: &str, exponents: &str, seminorms: Vec<SeminormTag>, ladder_levels: bool, points: Vec<SeqProfile>, sets: Vec<BoundedSetGen>) -> SemigroupSpec {
    SemigroupSpec::Diagonal { space: space.into(), exponents: exponents.into(), seminorms, ladder_levels, points, sets }
}

fn shift(variant: ShiftVariant, seminorms: Vec<SeminormTag>, points: Vec<Family>, sets: Vec<FunctionSet>) -> SemigroupSpec {
    SemigroupSpec::Shift { variant, seminorms, points, sets }
}

fn shift_scenarios() -> Vec<ScenarioSpec> {
    use ShiftVariant::*;
    let evals = || [0.5, 1.0, 2.0, 5.0].into_iter().map(SeminormTag::PointEval).collect::<Vec<_>>();
    let compact = |v: &[f64]| v.iter().map(|&n| SeminormTag::CompactSup(n)).collect::<Vec<_>>();
    let bumps = |direction: f64, count: Option<usize>| FunctionSet::Gen(BoundedSetGen::TranslatedBumps { direction, count });
    let weighted = vec![
        SeminormTag::WeightedSup(WeightFn::One),
        SeminormTag::WeightedSup(WeightFn::Poly { power: 2.0 }),
        SeminormTag::WeightedSup(WeightFn::Exp { rate: 1.0 }),
    ];
    let free = hyp(false, false, false, false, false);
    vec![
        scenario(
            "shift-1-ptw-line",
            "Example 3.1",
            "right shift on C(R), pointwise topology",
            "FFFFFFF",
            shift(FullLine, evals(), vec![Family::Constant(1.0), tent(0.0)], vec![FunctionSet::Members { label: "constants".into(), members: vec![Family::Constant(1.0)] }]),
            free,
            SHIFT_J,
        ),
        scenario(
            "shift-1-ptw-halfline-zero",
            "Example 3.1",
            "right shift on {f in C[0,inf): f(0) = 0}, pointwise topology",
            "TTTTTTT",
            shift(RightHalfZero, evals(), vec![tent(1.0), Family::Hat { n: 4 }], vec![FunctionSet::Gen(BoundedSetGen::HatFamily)]),
            hyp(false, false, false, false, true),
            SHIFT_J,
        ),
        scenario(
            "shift-2-co-line",
            "Example 3.2",
            "right shift on C(R), compact-open topology",
            "FFFFFFF",
            shift(FullLine, compact(&[1.0, 2.0, 5.0, 10.0]), vec![Family::Constant(1.0), tent(-3.0)], vec![bumps(-1.0, None)]),
            hyp(true, true, true, false, false),
            SHIFT_J,
        ),
        scenario(
            "shift-2-co-halfline-zero",
            "Example 3.2",
            "right shift on {f in C[0,inf): f(0) = 0}, compact-open topology",
            "TTTTTTT",
            shift(RightHalfZero, compact(&[1.0, 2.0, 5.0, 10.0]), vec![tent(1.0), tent(3.0)], vec![bumps(1.0, None)]),
            hyp(true, true, true, false, true),
            SHIFT_J,
        ),
        scenario(
            "shift-3-cc-co-line",
            "Example 3.3",
            "right shift on C_c(R), compact-open topology",
            "FFTTFFT",
            shift(FullLine, compact(&[1.0, 2.0, 5.0]), vec![tent(0.0), tent(-3.0)], vec![bumps(-1.0, None)]),
            hyp(false, false, false, false, false),
            SHIFT_J,
        ),
        scenario(
            "shift-cc-ind-halfline",
            "Example 3.4",
            "right shift on C_c(-inf,0], inductive limit topology",
            "TTTTTTT",
            shift(LeftHalf, weighted.clone(), vec![tent(-1.0), tent(-3.0)], vec![bumps(-1.0, Some(5))]),
            hyp(true, true, false, false, true),
            SHIFT_J,
        ),
        scenario(
            "shift-4-cc-ind-line",
            "Example 3.4",
            "right shift on C_c(R), inductive limit topology",
            "FFFFFFF",
            shift(FullLine, weighted, vec![tent(0.0), tent(-3.0)], vec![bumps(-1.0, Some(5))]),
            hyp(true, true, false, false, false),
            SHIFT_J,
        ),
    ]
}

fn diagonal_scenarios() -> Vec<ScenarioSpec> {
    use SeqProfile::*;
    let sup = || vec![SeminormTag::WeightedSup(WeightFn::One)];
    let c0 = |m: bool| FRECHET(m);
    vec![
        scenario(
            "mult-phi-supnorm",
            "Example 3.5",
            "multiplication by e^{-t/j} on finite sequences with the sup norm",
            "FFTTFFT",
            diag("phi-supnorm", "-1/j", sup(), false, vec![Basis(1), Harmonic(10)], vec![BoundedSetGen::BasisFamily { from: 1, to: None }]),
            hyp(false, false, false, false, true),
            DIAGONAL_J,
        ),
        scenario(
            "mult-phi-directsum",
            "Example 3.6",
            "multiplication by e^{-t/j} on finite sequences with the direct sum topology",
            "FFTTTTT",
            diag(
                "phi-direct-sum",
                "-1/j",
                vec![SeminormTag::WeightedSup(WeightFn::One), SeminormTag::SumAbs, SeminormTag::WeightedSup(WeightFn::Poly { power: 2.0 })],
                false,
                vec![Basis(1), Harmonic(10)],
                vec![BoundedSetGen::BasisLadder],
            ),
            hyp(true, true, false, true, true),
            DIAGONAL_J,
        ),
        scenario(
            "mult-3-c0",
            "Example 3.7",
            "multiplication by e^{-t/j} on c0",
            "FFFFFFT",
            diag("c0:constant", "-1/j", levels(), false, vec![Basis(1), Power(1.0), ExpSqrt], vec![BoundedSetGen::OrderInterval(Ones)]),
            c0(false),
            DIAGONAL_J,
        ),
        scenario(
            "mult-4-cn",
            "Example 3.8",
            "multiplication by e^{-t/j} on C^N",
            "FTFTTTT",
            diag("c0:cn", "-1/j", Vec::new(), true, vec![Basis(1), Ones, Power(1.0)], vec![BoundedSetGen::OrderInterval(Ones)]),
            c0(true),
            DIAGONAL_J,
        ),
        scenario(
            "mult-5-s-space",
            "Example 3.9",
            "multiplication by e^{-t/j} on s",
            "FFFFTTT",
            diag("c0:s", "-1/j", levels(), false, vec![Basis(1), Exp(1.0), Exp(0.5)], vec![BoundedSetGen::OrderInterval(Exp(1.0))]),
            c0(true),
            DIAGONAL_J,
        ),
        scenario(
            "mult-6-s-oscillating",
            "Example 3.10",
            "multiplication by e^{(-2/j + ij)t} on s; (S) holds",
            "FFFFTTT",
            diag("c0:s", "power:2:1:1", levels(), false, vec![Basis(1), Exp(1.0), Exp(0.5)], vec![BoundedSetGen::OrderInterval(Exp(1.0))]),
            c0(true),
            DIAGONAL_J,
        ),
        scenario(
            "mult-7-s-sqrt",
            "Example 3.11",
            "multiplication by e^{-t/sqrt j} on s; (M) holds",
            "FFFFTTT",
            diag("c0:s", "-1/sqrt(j)", levels(), false, vec![Basis(1), Exp(1.0), Exp(0.5)], vec![BoundedSetGen::OrderInterval(Exp(1.0))]),
            c0(true),
            DIAGONAL_J,
        ),
        scenario(
            "mult-8-m-not-s",
            "Example 3.12",
            "multiplication by e^{-t/j} on c0(A) with A satisfying (M) but not (S)",
            "FFFFFTT",
            diag("c0:m-not-s", "-1/j", levels(), false, vec![Basis(1), PairExp], vec![BoundedSetGen::OrderInterval(PairExp)]),
            c0(true),
            DIAGONAL_J,
        ),
        scenario(
            "mult-uniform-baseline",
            "Section 3.2 preamble",
            "multiplication by e^{-t} on s",
            "TTTTTTT",
            diag("c0:s", "constant:-1", levels(), false, vec![Basis(1), Exp(1.0), Exp(0.5)], vec![BoundedSetGen::OrderInterval(Exp(1.0))]),
            c0(true),
            DIAGONAL_J,
        ),
    ]
}

fn field_scenarios() -> Vec<ScenarioSpec> {
    let transport = |q: ScalarField| SemigroupSpec::Transport { q, seminorms: schwartz_norms(), points: schwartz_points(), sets: vec![schwartz_set()] };
    let s_space = FRECHET(true);
    vec![
        scenario("transport-const-neg", "Section 5.1", "transport with q = -1/2 on S", "TTTTTTT", transport(ScalarField::Constant(-0.5)), s_space, FUNCTION_J),
        scenario("transport-q0", "Section 5.1", "pure translation on S", "FFFFFFF", transport(ScalarField::Constant(0.0)), s_space, FUNCTION_J),
        scenario(
            "transport-monotone-to-zero",
            "Example 5.2",
            "transport with q = -1/(1+x^2), negative and increasing to 0 on [0, inf)",
            "FFFFFFF",
            transport(ScalarField::NegLorentz),
            s_space,
            FUNCTION_J,
        ),
        scenario("transport-sin-minus-1", "Example 5.3", "transport with q = sin x - 1 on S", "TTTTTTT", transport(ScalarField::SinMinusOne), s_space, FUNCTION_J),
        scenario(
            "mult-S-remark",
            "Remark 5.6",
            "multiplication by e^{q(x)t} on S with q = -1/|x| off (-1, 1)",
            "FFFFTTT",
            SemigroupSpec::Multiply { q: ScalarField::InverseAbs, seminorms: schwartz_norms(), points: schwartz_points(), sets: vec![schwartz_set()] },
            s_space,
            FUNCTION_J,
        ),
    ]
}

fn heat_scenarios() -> Vec<ScenarioSpec> {
    // Fourier-side profiles stay centred so that every derivative is closed-form.
    let centred = |a: f64, coeffs: Vec<f64>| Family::GaussPoly { coeffs, a, c: 0.0 };
    let on_s = |q_re: f64| SemigroupSpec::Heat {
        q_re,
        q_im: 0.0,
        seminorms: schwartz_norms(),
        points: vec![gauss(0.0), centred(0.5, vec![1.0, 0.0, 1.0])],
        sets: vec![FunctionSet::Members { label: "centred-gauss-family".into(), members: vec![gauss(0.0), centred(0.5, vec![0.0, 1.0]), centred(2.0, vec![1.0, 0.0, 3.0])] }],
    };
    let on_h = |q_re: f64| SemigroupSpec::Heat {
        q_re,
        q_im: 0.0,
        seminorms: (0..=2).map(SeminormTag::SobolevFourier).collect(),
        points: vec![gauss(0.0), Family::Indicator { lo: 0.0, hi: 1.0, height: 1.0 }],
        sets: vec![FunctionSet::Gen(BoundedSetGen::IndicatorFamily)],
    };
    let fr = FRECHET(true);
    vec![
        scenario("heat-S-q-neg", "Proposition 5.4", "scaled Gaussian semigroup on S, q = -1", "TTTTTTT", on_s(-1.0), fr, FUNCTION_J),
        scenario("heat-S-q0", "Proposition 5.4", "Gaussian semigroup on S, q = 0", "FFFFFFF", on_s(0.0), fr, FUNCTION_J),
        scenario("heat-H-q-neg", "Proposition 5.5", "scaled Gaussian semigroup on H, q = -1", "TTTTTTT", on_h(-1.0), fr, HEAT_H_J),
        scenario("heat-H-q0", "Proposition 5.5", "Gaussian semigroup on H, q = 0", "FFFFFFT", on_h(0.0), fr, HEAT_H_J),
    ]
}

/// Every built-in scenario, in a stable order.
pub fn registry() -> Vec<ScenarioSpec> {
    let mut out = shift_scenarios();
    out.extend(diagonal_scenarios());
    out.extend(field_scenarios());
    out.extend(heat_scenarios());
    out
}

pub fn find(name: &str) -> Result<ScenarioSpec> {
    registry().into_iter().find(|s| s.name == name).ok_or_else(|| Error::Unknown { kind: "scenario", name: name.to_string() })
}
