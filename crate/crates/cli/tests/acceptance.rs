//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wilson_cli::{cyclo_expected, cyclo_report};
use wilson_core::intmath::small_primes;
use wilson_core::prime::{factor_prime, ideals_up_to, integer_ideal};
use wilson_core::wilson::{classify_gauss, classify_global, d2_local, group_sum, uniformizer, AbelianGroupSpec};
use wilson_core::{D2Class, FactoredIdeal, NumberFieldOrder, ResidueRing, DEFAULT_CAP};

const CATALOG: &[&str] = &["x", "x^2+1", "x^2-2", "x^2+x+1", "x^2-x-1", "x^4+1"];

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn order(text: &str) -> NumberFieldOrder {
    NumberFieldOrder::parse(text).expect("catalog polynomial")
}

/// `A = 4`, `p^m` or `2p^m` with `p` odd, decided by trial division.
fn gauss_form(a: u64) -> bool {
    let mut n = a;
    let mut twos = 0;
    while n.is_multiple_of(2) {
        n /= 2;
        twos += 1;
    }
    if n == 1 {
        return twos == 2;
    }
    let p = (3..).step_by(2).find(|q| n.is_multiple_of(*q)).unwrap();
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1 && twos <= 1
}

fn gauss_sweep() -> Outcome {
    let z = NumberFieldOrder::integers();
    let mut minus = 0;
    for a in 2u64..=2000 {
        let ring = ResidueRing::new(&z, &integer_ideal(&z, a).unwrap(), DEFAULT_CAP).unwrap();
        let product = ring.unit_product().coeffs()[0] as u64;
        let expected = if gauss_form(a) { a - 1 } else { 1 % a };
        ensure(product == expected, || format!("A = {a}: product {product}, expected {expected}"))?;
        let sign = classify_gauss(a).unwrap();
        ensure((sign == -1) == gauss_form(a), || format!("A = {a}: classify_gauss gave {sign}"))?;
        minus += usize::from(gauss_form(a));
    }
    Ok(format!("1999 moduli, {minus} with product -1"))
}

fn example3_table() -> Outcome {
    let z = NumberFieldOrder::integers();
    let mut rings = 0;
    for p in [2u64, 3, 5, 7, 11] {
        let prime = factor_prime(&z, p).unwrap().remove(0);
        let mut n = 1;
        while p.pow(n) <= DEFAULT_CAP {
            let ring = ResidueRing::new(&z, &FactoredIdeal::prime_power(prime.clone(), n), DEFAULT_CAP).unwrap();
            let d2 = ring.order2_census().unwrap().d2;
            let table = match (p, n) {
                (2, 1) => 0,
                (2, 2) => 1,
                (2, _) => 2,
                _ => 1,
            };
            ensure(d2 == table, || format!("{p}^{n}: census d2 {d2}, table {table}"))?;
            ensure(d2_local(p, 1, 1, n) == D2Class::Exact(table), || format!("d2_local({p}, 1, 1, {n})"))?;
            rings += 1;
            n += 1;
        }
    }
    Ok(format!("{rings} rings Z/p^n"))
}

fn prop5_catalog() -> Outcome {
    let mut rings = 0;
    let mut exact = 0;
    let mut hasse = 0;
    for text in ["x^2+1", "x^2-2", "x^2+x+1", "x^2-x-1", "x^4+1"] {
        let o = order(text);
        let prime = factor_prime(&o, 2).unwrap().remove(0);
        let (e, f) = (prime.ram_index, prime.res_degree);
        let norm = prime.norm().to_string().parse::<u64>().unwrap();
        let mut n = 1;
        while norm.pow(n) <= DEFAULT_CAP {
            let ring = ResidueRing::new(&o, &FactoredIdeal::prime_power(prime.clone(), n), DEFAULT_CAP).unwrap();
            let d2 = ring.order2_census().unwrap().d2;
            let class = d2_local(2, e, f, n);
            ensure(class.admits(d2), || format!("{text}, P^{n}: census d2 {d2}, d2_local {class:?}"))?;
            if n > 2 * e {
                ensure(d2 == 1 + e * f, || format!("{text}, P^{n}: n > 2e but d2 = {d2}"))?;
                hasse += 1;
            }
            exact += usize::from(matches!(class, D2Class::Exact(_)));
            rings += 1;
            n += 1;
        }
    }
    Ok(format!("{rings} rings ({exact} exact, {hasse} in the n > 2e regime)"))
}

fn prop2_oracle() -> Outcome {
    let mut summary = Vec::new();
    let mut total = 0;
    for text in CATALOG {
        let o = order(text);
        let (ideals, skipped) = ideals_up_to(&o, &[2, 3, 5, 7, 11, 13], 8, DEFAULT_CAP).unwrap();
        ensure(skipped.is_empty(), || format!("{text}: not maximal at {skipped:?}"))?;
        let mut composite = [0usize; 2];
        for a in &ideals {
            let ring = ResidueRing::new(&o, a, DEFAULT_CAP).unwrap();
            let w = classify_global(&o, a, DEFAULT_CAP).unwrap();
            let oracle = ring.unit_product();
            ensure(w.witness.as_ref() == Some(&oracle), || {
                format!("{text}, {}: witness {:?}, oracle {oracle}", a.to_text(), w.witness)
            })?;
            match a.factors().len() {
                2 => composite[0] += 1,
                3 => composite[1] += 1,
                _ => {}
            }
        }
        ensure(composite[0] > 0 && composite[1] > 0, || format!("{text}: no composite ideals"))?;
        total += ideals.len();
        summary.push(format!("{text}: {}", ideals.len()));
    }
    Ok(format!("{total} ideals ({})", summary.join(", ")))
}

fn example7() -> Outcome {
    for (t, n_max) in [(2, 8), (3, 5)] {
        let report = cyclo_report(t, n_max, DEFAULT_CAP).map_err(|e| e.to_string())?;
        let expected: Vec<&str> = (1..=n_max).map(cyclo_expected).collect();
        ensure(report.pattern == expected, || format!("t = {t}: pattern {:?}", report.pattern))?;
        for r in &report.rows {
            ensure(r.witness.as_ref() == Some(&r.oracle), || format!("t = {t}, n = {}: oracle {}", r.n, r.oracle))?;
        }
    }
    Ok("t = 2 (n ≤ 8) and t = 3 (n ≤ 5) give 1, 1+π, 1+π², 1, …".into())
}

fn coincidences() -> Outcome {
    let z = NumberFieldOrder::integers();
    let p2 = factor_prime(&z, 2).unwrap().remove(0);
    let r = ResidueRing::new(&z, &FactoredIdeal::prime_power(p2.clone(), 2), DEFAULT_CAP).unwrap();
    let pi = r.from_order_element(&uniformizer(&z, &p2).unwrap());
    ensure(r.add(&r.one(), &pi) == r.minus_one(), || "1 + π ≠ -1 in Z/4".into())?;

    let s2 = order("x^2-2");
    let q = factor_prime(&s2, 2).unwrap().remove(0);
    let r = ResidueRing::new(&s2, &FactoredIdeal::prime_power(q.clone(), 3), DEFAULT_CAP).unwrap();
    let pi = r.from_order_element(&uniformizer(&s2, &q).unwrap());
    ensure(r.add(&r.one(), &r.mul(&pi, &pi)) == r.minus_one(), || "1 + π² ≠ -1 in Z[√2]/P^3".into())?;

    let mut checked = 0;
    for text in CATALOG {
        let o = order(text);
        for p in small_primes(13) {
            for prime in factor_prime(&o, p).unwrap() {
                for n in 1..=2 * prime.ram_index + 2 {
                    let a = FactoredIdeal::prime_power(prime.clone(), n);
                    let Ok(ring) = ResidueRing::new(&o, &a, DEFAULT_CAP) else { break };
                    let coincide = ring.minus_one() == ring.one();
                    let predicted = p == 2 && n <= prime.ram_index;
                    ensure(coincide == predicted, || format!("{text}, {}: -1 = 1 is {coincide}", a.to_text()))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("both identities hold; -1 = 1 rule checked on {checked} rings"))
}

fn lemma4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..500 {
        let k = rng.gen_range(1..=4);
        let orders: Vec<u64> = (0..k).map(|_| rng.gen_range(2..=16)).collect();
        let g = AbelianGroupSpec::new(orders.clone()).unwrap();
        let mut sum = vec![0u64; k];
        let mut x = vec![0u64; k];
        let total: u64 = orders.iter().product();
        for _ in 0..total {
            for ((s, xi), n) in sum.iter_mut().zip(&x).zip(&orders) {
                *s = (*s + xi) % n;
            }
            for (xi, n) in x.iter_mut().zip(&orders) {
                *xi += 1;
                if *xi < *n {
                    break;
                }
                *xi = 0;
            }
        }
        ensure(group_sum(&g) == sum, || format!("{orders:?}: closed form {:?}, enumeration {sum:?}", group_sum(&g)))?;
    }
    Ok("500 random groups".into())
}

fn structural() -> Outcome {
    const SMALL: u64 = 1 << 14;
    let mut rings = 0;
    for text in CATALOG {
        let o = order(text);
        for p in small_primes(100) {
            let total: u32 = factor_prime(&o, p)
                .unwrap()
                .iter()
                .map(|q| q.ram_index * q.res_degree)
                .sum();
            ensure(total as usize == o.degree(), || format!("{text} at {p}: Σ e f = {total}"))?;
        }
        for a in ideals_up_to(&o, &[2, 3, 5, 7], 8, SMALL).unwrap().0 {
            let ring = ResidueRing::new(&o, &a, SMALL).unwrap();
            let units = ring.units().len() as u64;
            ensure(units == ring.unit_count_formula(), || format!("{text}, {}: {units} units", a.to_text()))?;
            let census = ring.order2_census().map_err(|e| e.to_string())?;
            ensure(census.order2_count + 1 == 1 << census.d2, || format!("{text}, {}: census", a.to_text()))?;
            rings += 1;
        }
    }
    let mut layered = Vec::new();
    for text in CATALOG {
        let o = order(text);
        let prime = factor_prime(&o, 2).unwrap().remove(0);
        if !(prime.ram_index > 1 && prime.res_degree == 1) {
            continue;
        }
        let pi = uniformizer(&o, &prime).unwrap();
        let r3 = ResidueRing::new(&o, &FactoredIdeal::prime_power(prime.clone(), 3), DEFAULT_CAP).unwrap();
        let mut u1 = r3.principal_units(1).unwrap();
        u1.sort();
        let g = r3.add(&r3.one(), &r3.from_order_element(&pi));
        ensure(r3.generated_subgroup(&[g]).unwrap() == u1, || format!("{text}: U1/U3 not generated by 1 + π"))?;
        let r4 = ResidueRing::new(&o, &FactoredIdeal::prime_power(prime, 4), DEFAULT_CAP).unwrap();
        let u1 = r4.principal_units(1).unwrap();
        let max_order = u1.iter().map(|x| r4.unit_order(x).unwrap()).max().unwrap();
        ensure(u1.len() == 8 && max_order < 8, || format!("{text}: U1/U4 cyclic"))?;
        layered.push(*text);
    }
    ensure(!layered.is_empty(), || "no field with e > 1, f = 1 at 2".into())?;
    Ok(format!("{rings} rings; filtration checks in {}", layered.join(", ")))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "Gauss sweep, 2 ≤ A ≤ 2000", budget: Duration::from_secs(10), run: gauss_sweep },
        Criterion { id: 2, name: "d2 of (Z/p^n)^× table", budget: Duration::from_secs(5), run: example3_table },
        Criterion { id: 3, name: "local d2 at even primes", budget: Duration::from_secs(60), run: prop5_catalog },
        Criterion { id: 4, name: "closed form vs enumeration", budget: Duration::from_secs(300), run: prop2_oracle },
        Criterion { id: 5, name: "cyclotomic pattern", budget: Duration::from_secs(30), run: example7 },
        Criterion { id: 6, name: "coincidence identities", budget: Duration::from_secs(60), run: coincidences },
        Criterion { id: 7, name: "group sums", budget: Duration::from_secs(10), run: lemma4 },
        Criterion { id: 8, name: "structural checks", budget: Duration::from_secs(120), run: structural },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > c.budget => Err(format!("exceeded {:?}", c.budget)),
            other => other,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        println!("[{tag}] criterion {}: {} ({:.2}s) {}", c.id, c.name, elapsed.as_secs_f64(), detail);
        failed += usize::from(outcome.is_err());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

