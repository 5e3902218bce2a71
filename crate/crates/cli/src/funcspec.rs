use std::str::FromStr;

use laplace_lp::{make_family, Error, FamilyParams, LebesgueExponent, TestFunction, Variant};

/// A textual function description:
/// `const1`, `exp:r`, `indicator:a,b`, `power:k`, `thm1:p,eps`, `thm2:p,eps`.
#[derive(Debug, Clone)]
pub struct FunctionSpec {
    text: String,
    function: TestFunction,
}

impl FunctionSpec {
    pub fn function(&self) -> &TestFunction {
        &self.function
    }

    pub fn text(&self) -> &str {
        &self.text
    }
}

fn numbers(args: &str, n: usize, text: &str) -> Result<Vec<f64>, Error> {
    let vals: Vec<f64> = args
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad(text))?;
    if vals.len() != n {
        return Err(bad(text));
    }
    Ok(vals)
}

fn bad(text: &str) -> Error {
    Error::InvalidParameter(format!(
        "cannot parse function '{text}' (expected const1, exp:r, indicator:a,b, power:k, thm1:p,eps or thm2:p,eps)"
    ))
}

fn family(variant: Variant, args: &str, text: &str) -> Result<TestFunction, Error> {
    let v = numbers(args, 2, text)?;
    let params = FamilyParams::new(LebesgueExponent::new(v[0])?, v[1], variant)?;
    Ok(make_family(params))
}

impl FromStr for FunctionSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self, Error> {
        let t = text.trim();
        let (head, args) = t.split_once(':').unwrap_or((t, ""));
        let function = match head {
            "const1" if args.is_empty() => TestFunction::constant(1.0),
            "exp" => TestFunction::exp_decay(numbers(args, 1, t)?[0])?,
            "indicator" => {
                let v = numbers(args, 2, t)?;
                TestFunction::indicator(v[0], v[1])?
            }
            "power" => TestFunction::power(numbers(args, 1, t)?[0], 0.0, f64::INFINITY)?,
            "thm1" => family(Variant::Thm1, args, t)?,
            "thm2" => family(Variant::Thm2, args, t)?,
            _ => return Err(bad(t)),
        };
        Ok(Self {
            text: t.to_string(),
            function,
        })
    }
}
