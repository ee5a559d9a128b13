//! Plain-text renderings of the JSON outputs.

use std::fmt::Write;

use ternquart::covariants::QuarticCurve;
use ternquart::forms::ProjPoint;
use ternquart::reconstruct::Reconstruction;
use ternquart::{Algebra, VerifyReport, C};

use crate::commands::{BatchEntry, BitangentsOutput, IdempotentsOutput};

fn c(z: &C) -> String {
    format!("{:+.9e}{:+.9e}i", z.re, z.im)
}

fn point(p: &ProjPoint) -> String {
    let v = p.coords();
    format!("({} : {} : {})", c(&v[0]), c(&v[1]), c(&v[2]))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "NO"
    }
}

pub fn algebra(a: &Algebra) -> String {
    let mut s = String::new();
    let names = ["e1", "e2", "e3"];
    for j in 0..3 {
        for k in j..3 {
            let v: Vec<String> = (0..3).map(|i| c(&a.constant(i, j, k))).collect();
            writeln!(s, "{}*{} = [{}]", names[j], names[k], v.join(", ")).unwrap();
        }
    }
    s
}

pub fn idempotents(o: &IdempotentsOutput) -> String {
    let mut s = String::new();
    writeln!(s, "{} points, total multiplicity {}", o.idempotents.points.len(), o.idempotents.total_multiplicity()).unwrap();
    for (i, p) in o.idempotents.points.iter().enumerate() {
        writeln!(s, "  a{} = {}  mult {}  square {}", i + 1, point(&p.point), p.multiplicity, if p.square_nonzero { "nonzero" } else { "zero" }).unwrap();
    }
    let g = &o.genericity;
    writeln!(s, "seven simple points: {}", yes(g.seven_simple_points)).unwrap();
    writeln!(s, "squares nonzero:     {}", yes(g.squares_nonzero)).unwrap();
    writeln!(s, "no three collinear:  {} (min {:.3e})", yes(g.position.no_three_collinear), g.position.min_triple_det.unwrap_or(f64::NAN)).unwrap();
    writeln!(s, "no six on a conic:   {} (min {:.3e})", yes(g.position.no_six_on_conic), g.position.min_conic_det.unwrap_or(f64::NAN)).unwrap();
    writeln!(s, "general position:    {}", yes(g.is_a0_double_prime)).unwrap();
    s
}

pub fn quartic(q: &QuarticCurve) -> String {
    let mut s = String::new();
    for (e, z) in q.form.terms() {
        if z.norm() > 0.0 {
            writeln!(s, "  {}  x1^{} x2^{} x3^{}", c(&z), e[0], e[1], e[2]).unwrap();
        }
    }
    writeln!(s, "lambda   {}", c(&q.lambda)).unwrap();
    writeln!(s, "scale_G  {:.6e}", q.scale_g).unwrap();
    writeln!(s, "scale_J  {:.6e}", q.scale_j).unwrap();
    writeln!(s, "residual {:.3e}", q.residual).unwrap();
    s
}

pub fn bitangents(o: &BitangentsOutput) -> String {
    let mut s = String::new();
    for cert in &o.certificates {
        writeln!(
            s,
            "{:5} {}  residual {:.3e}{}",
            cert.label,
            if cert.is_bitangent { "bitangent" } else { "NOT bitangent" },
            cert.residual,
            if cert.hyperflex { "  hyperflex" } else { "" }
        )
        .unwrap();
    }
    writeln!(s, "{}/{} bitangents, min line distance {:.3e}", o.bitangent_count, o.certificates.len(), o.min_line_distance).unwrap();
    s
}

pub fn verify(r: &VerifyReport) -> String {
    let mut s = String::new();
    let g = &r.genericity;
    writeln!(s, "general position     {}", yes(g.is_a0_double_prime)).unwrap();
    if !g.is_a0_double_prime {
        writeln!(s, "  seven simple points {}", yes(g.seven_simple_points)).unwrap();
        writeln!(s, "  squares nonzero     {} {:?}", yes(g.squares_nonzero), g.square_zero_points).unwrap();
        writeln!(s, "  no three collinear  {} {:?}", yes(g.position.no_three_collinear), g.position.collinear_triples).unwrap();
        writeln!(s, "  no six on a conic   {} {:?}", yes(g.position.no_six_on_conic), g.position.conic_subsets).unwrap();
    }
    if !g.is_a0_double_prime {
        writeln!(s, "later checks         skipped").unwrap();
    } else {
        writeln!(s, "cubics Q_i           {}", yes(r.qi_pass)).unwrap();
        writeln!(s, "cubics Q_ij          {}", yes(r.qij_pass)).unwrap();
    }
    if let Some(q) = &r.quartic {
        writeln!(s, "quartic identity     {} (residual {:.3e})", yes(r.quartic_pass), q.residual).unwrap();
    }
    if let Some(t) = &r.theorem {
        writeln!(s, "smooth quartic       {}", yes(t.smooth_pass)).unwrap();
        writeln!(s, "bitangents           {} ({}/28)", yes(t.bitangents_pass), t.bitangent_count).unwrap();
        writeln!(s, "generic fibers       {}", yes(t.generic_fibers_pass)).unwrap();
        writeln!(s, "branch fibers        {}", yes(t.branch_fibers_pass)).unwrap();
    }
    if let Some(rt) = &r.roundtrip {
        writeln!(s, "round trip           {} (distance {:.3e})", yes(r.roundtrip_pass), rt.algebra_distance).unwrap();
    }
    writeln!(s, "overall              {}", if r.pass { "PASS" } else { "FAIL" }).unwrap();
    s
}

pub fn batch(entries: &[BatchEntry]) -> String {
    let mut s = String::new();
    for e in entries {
        match &e.error {
            Some(err) => writeln!(s, "ERROR {}: {}", e.input, err).unwrap(),
            None => writeln!(s, "{} {}", if e.pass { "PASS " } else { "FAIL " }, e.input).unwrap(),
        }
    }
    let n = entries.iter().filter(|e| e.pass).count();
    writeln!(s, "{n}/{} passed", entries.len()).unwrap();
    s
}

pub fn reconstruction(r: &Reconstruction) -> String {
    let mut s = algebra(&r.algebra);
    writeln!(s, "nullspace gap    {:.3e}", r.nullspace_gap).unwrap();
    writeln!(s, "forward residual {:.3e}", r.forward_residual).unwrap();
    s
}
