#include <pybind11/complex.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "rigidseq/cfrac.hpp"
#include "rigidseq/dualgroup.hpp"
#include "rigidseq/errors.hpp"
#include "rigidseq/folner.hpp"
#include "rigidseq/pisot.hpp"
#include "rigidseq/recurrence.hpp"

namespace py = pybind11;
using namespace rigidseq;

namespace {

py::object fraction(const Rational& r) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(r.numerator(), r.denominator());
}

Rational to_rational(const py::handle& h) {
  const py::object f = py::module_::import("fractions").attr("Fraction")(h);
  return Rational(f.attr("numerator").cast<std::int64_t>(), f.attr("denominator").cast<std::int64_t>());
}

MonicIntPoly minpoly(const std::vector<std::string>& coeffs, std::uint32_t p) {
  const PrimeModulus m(p);
  std::vector<Poly> c;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) c.push_back(Poly::parse_body(*it, m));
  return MonicIntPoly(std::move(c));
}

std::vector<std::string> bodies(const std::vector<Poly>& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(x.body());
  return out;
}

py::object exponent(const AbsValue& v) { return v.is_zero() ? py::object(py::none()) : py::int_(v.exponent()); }

} // namespace

PYBIND11_MODULE(_rigidseq, m) {
  m.doc() = "Exact arithmetic over F_p[t] and F_p((1/t)), continued fractions, PV elements and rigidity checks.";

  py::register_exception<PrecisionError>(m, "PrecisionError", PyExc_ArithmeticError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<DivisionByZero>(m, "DivisionByZero", PyExc_ZeroDivisionError);

  py::class_<Poly>(m, "Poly")
      .def(py::init([](std::uint32_t p, std::vector<std::uint32_t> c) { return Poly(PrimeModulus(p), std::move(c)); }),
           py::arg("p"), py::arg("coeffs"))
      .def_static("parse", [](const std::string& s) { return Poly::parse(s); })
      .def_property_readonly("p", [](const Poly& a) { return a.modulus().value(); })
      .def_property_readonly("coeffs", &Poly::coeffs)
      .def_property_readonly("degree", &Poly::degree)
      .def("body", &Poly::body)
      .def("__str__", &Poly::str)
      .def("__repr__", [](const Poly& a) { return "Poly('" + a.str() + "')"; })
      .def("__divmod__", [](const Poly& a, const Poly& b) { return divmod(a, b); })
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * py::self)
      .def(-py::self)
      .def(py::self == py::self);

  py::class_<Laurent>(m, "Laurent")
      .def_static("parse", [](const std::string& s) { return Laurent::parse(s); })
      .def_static("from_poly", &Laurent::from_poly)
      .def_property_readonly("precision", &Laurent::precision)
      .def_property_readonly("is_exact", &Laurent::is_exact)
      .def("coeff", &Laurent::coeff)
      .def("abs_exponent", [](const Laurent& x) { return exponent(x.abs()); })
      .def("integer_part", [](const Laurent& x) { return integer_part(x); })
      .def("fractional_part", [](const Laurent& x) { return fractional_part(x); })
      .def("dist_exponent", [](const Laurent& x) { return exponent(dist_to_integers(x)); })
      .def("inverse", [](const Laurent& x, std::int64_t prec) { return inverse(x, prec); }, py::arg("precision"))
      .def("agrees_with", &Laurent::agrees_with)
      .def("__str__", &Laurent::str)
      .def("__repr__", [](const Laurent& x) { return "Laurent('" + x.str() + "')"; })
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * py::self)
      .def(py::self == py::self);

  m.def("fibonacci_alpha", [](std::uint32_t p, std::int64_t prec) { return fibonacci_alpha(PrimeModulus(p), prec); },
        py::arg("p"), py::arg("precision"));
  m.def(
      "cf_quotients",
      [](const Laurent& alpha, std::size_t n, std::int64_t wp) { return cf_expand(alpha, n, wp).quotients; },
      py::arg("alpha"), py::arg("n"), py::arg("working_precision") = kDefaultPrecision);
  m.def(
      "cf_rational", [](const Poly& num, const Poly& den, std::size_t n) { return cf_expand(RationalFunction{num, den}, n).quotients; },
      py::arg("num"), py::arg("den"), py::arg("n"));
  m.def(
      "convergents",
      [](const std::vector<Poly>& quotients) {
        CFExpansion cf{Laurent::exact_zero(quotients.front().modulus()), std::nullopt, quotients, false};
        const Convergents c = convergents(cf);
        return std::make_pair(c.p, c.q);
      },
      py::arg("quotients"), "(p_n, q_n) lists for the given partial quotients.");
  m.def(
      "approximation_certificate",
      [](const Laurent& alpha, std::size_t n, std::int64_t wp) {
        const Certificate cert = verify_approx(alpha, convergents(cf_expand(alpha, n, wp)));
        return cert.passed();
      },
      py::arg("alpha"), py::arg("n"), py::arg("working_precision") = kDefaultPrecision);

  m.def(
      "newton_slopes",
      [](const std::vector<std::string>& coeffs, std::uint32_t p) {
        std::vector<std::pair<py::object, int>> out;
        for (const auto& s : newton_polygon(minpoly(coeffs, p)).slopes) out.emplace_back(fraction(s.value), s.multiplicity);
        return out;
      },
      py::arg("coeffs"), py::arg("p"), "Slopes of x^d - c_{d-1}x^{d-1} - ... - c_0; coeffs run c_{d-1}, ..., c_0.");
  m.def("is_pv", [](const std::vector<std::string>& coeffs, std::uint32_t p) { return is_pv(minpoly(coeffs, p)); },
        py::arg("coeffs"), py::arg("p"));
  m.def(
      "pv_root", [](const std::vector<std::string>& coeffs, std::uint32_t p, std::int64_t prec) { return pv_root(minpoly(coeffs, p), prec).root; },
      py::arg("coeffs"), py::arg("p"), py::arg("precision"));
  m.def(
      "pv_traces", [](const std::vector<std::string>& coeffs, std::uint32_t p, unsigned n) { return bodies(trace_sequence(minpoly(coeffs, p), n)); },
      py::arg("coeffs"), py::arg("p"), py::arg("n"));
  m.def(
      "pv_floors",
      [](const std::vector<std::string>& coeffs, std::uint32_t p, unsigned n, std::int64_t prec) {
        return bodies(pv_floor_powers(pv_root(minpoly(coeffs, p), prec), n));
      },
      py::arg("coeffs"), py::arg("p"), py::arg("n"), py::arg("precision"));
  m.def(
      "pv_norm_exponents",
      [](const std::vector<std::string>& coeffs, std::uint32_t p, unsigned n, std::int64_t prec) {
        std::vector<py::object> out;
        for (const auto& v : pv_norm_decay_adaptive(minpoly(coeffs, p), n, prec).decay.norms) out.push_back(exponent(v));
        return out;
      },
      py::arg("coeffs"), py::arg("p"), py::arg("n"), py::arg("precision") = 64,
      "Exponents of ||alpha^n|| (None for zero), raising the precision as needed.");
  m.def(
      "real_pv_table",
      [](const std::string& name, unsigned n) {
        RealPVSpec spec;
        if (name == "golden") spec = golden_ratio_spec();
        else if (name == "plastic") spec = plastic_number_spec();
        else throw py::value_error("name must be 'golden' or 'plastic'");
        const RealPVTable t = real_pv_table(spec, n);
        py::list rows;
        for (const auto& r : t.rows) {
          py::dict d;
          d["n"] = r.n;
          d["trace"] = r.trace;
          d["nearest"] = r.nearest;
          d["norm_power"] = r.norm_power;
          d["norm_nearest_times_alpha"] = r.norm_nearest_times_alpha;
          d["decay_bound"] = r.decay_bound;
          rows.append(d);
        }
        return rows;
      },
      py::arg("name"), py::arg("n"));

  m.def(
      "poly_pair",
      [](const Laurent& x, const Poly& a) {
        const RootOfUnity z = poly_pair(x, a);
        return std::make_pair(z.residue(), z.order());
      },
      py::arg("x"), py::arg("a"), "<x, a> as (r, m), meaning exp(2 pi i r / m).");

  m.def(
      "tile_density",
      [](const std::vector<std::uint32_t>& primes, std::uint64_t n, std::uint64_t mm) {
        const TileDensityReport r = tile_density_check(primes, n, mm);
        return py::make_tuple(fraction(r.density), fraction(r.expected), r.max_tile_hits);
      },
      py::arg("primes"), py::arg("n"), py::arg("m"));

  m.def(
      "recurrence_check",
      [](const std::vector<std::uint32_t>& moduli, const std::vector<std::vector<std::uint32_t>>& R, const py::object& delta,
         std::uint64_t budget) {
        const FiniteAbelian G(moduli);
        FiniteModel model{G, {}, to_rational(delta)};
        for (const auto& r : R) model.R.push_back(G.encode(r));
        const RecurrenceVerdict v = delta_recurrence_bruteforce(model, budget);
        py::dict d;
        d["pass"] = v.pass;
        d["subset_size"] = v.subset_size;
        if (v.counterexample) {
          std::vector<std::vector<std::uint32_t>> ce;
          for (auto x : *v.counterexample) ce.push_back(G.decode(x));
          d["counterexample"] = ce;
        } else {
          d["counterexample"] = py::none();
        }
        return d;
      },
      py::arg("moduli"), py::arg("R"), py::arg("delta"), py::arg("budget") = kDefaultBudget);

  m.def(
      "cube_check",
      [](const std::vector<std::uint32_t>& k, unsigned d, const py::object& delta, const py::object& eps, const std::string& mode,
         std::uint64_t samples, std::uint64_t seed, unsigned threads) {
        if (mode != "exhaustive" && mode != "sampled") throw py::value_error("mode must be 'exhaustive' or 'sampled'");
        const CubeInstance inst{k, d, to_rational(delta), to_rational(eps)};
        const CubeVerdict v =
            cube_lemma_check(inst, mode == "exhaustive" ? CubeMode::Exhaustive : CubeMode::Sampled, samples, seed, threads);
        py::dict out;
        out["verdict"] = CubeVerdict::name(v.status);
        out["sampled"] = v.sampled;
        out["sets_checked"] = v.sets_checked;
        out["worst_distance"] = v.worst_distance;
        return out;
      },
      py::arg("k"), py::arg("d"), py::arg("delta"), py::arg("eps"), py::arg("mode") = "exhaustive", py::arg("samples") = 0,
      py::arg("seed") = 0, py::arg("threads") = 1);
  m.def("mcdiarmid_bound", &mcdiarmid_bound, py::arg("delta"), py::arg("eps"));
  m.def(
      "blowup_lower_bound", [](double alpha, unsigned d, double t) { return blowup_lower_bound(alpha, d, t).clamped; },
      py::arg("alpha"), py::arg("d"), py::arg("t"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run a rigidseq subcommand in-process; returns (exit_code, stdout, stderr).");
}
