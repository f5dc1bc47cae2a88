#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "relaycap/af.hpp"
#include "relaycap/capacity.hpp"
#include "relaycap/concentration.hpp"
#include "relaycap/montecarlo.hpp"

namespace py = pybind11;
using namespace relaycap;

namespace {

py::array_t<cplx> to_numpy(const std::vector<cplx>& v, int rows, int cols) {
    py::array_t<cplx> out({rows, cols});
    auto buf = out.mutable_unchecked<2>();
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) buf(i, j) = v[static_cast<std::size_t>(i) * cols + j];
    return out;
}

Protocol proto_of(const std::string& name) {
    if (name == "P1") return Protocol::P1;
    if (name == "P2") return Protocol::P2;
    if (name == "P1-coop") return Protocol::P1Coop;
    if (name == "P2-coop") return Protocol::P2Coop;
    throw std::invalid_argument("unknown protocol: " + name);
}

}  // namespace

PYBIND11_MODULE(_relaycap, m) {
    m.doc() = "fading interference relay network capacity toolkit";

    py::class_<NetworkConfig>(m, "NetworkConfig")
        .def_static("uniform_gains", &NetworkConfig::uniform_gains, py::arg("M"), py::arg("K"),
                    py::arg("sigma2"), py::arg("p_rel"), py::arg("e_const") = 1.0,
                    py::arg("p_const") = 1.0, py::arg("L") = 1, py::arg("seed") = 0)
        .def_readonly("M", &NetworkConfig::M)
        .def_readonly("K", &NetworkConfig::K)
        .def_readonly("L", &NetworkConfig::L)
        .def_readonly("Q", &NetworkConfig::Q)
        .def_readonly("sigma2", &NetworkConfig::sigma2)
        .def_readonly("p_rel", &NetworkConfig::p_rel)
        .def_readonly("seed", &NetworkConfig::seed);

    py::class_<GainBounds>(m, "GainBounds")
        .def_readonly("C_lo", &GainBounds::C_lo)
        .def_readonly("C_hi", &GainBounds::C_hi)
        .def_readonly("c_lo", &GainBounds::c_lo)
        .def_readonly("c_hi", &GainBounds::c_hi)
        .def_readonly("Csn_lo", &GainBounds::Csn_lo)
        .def_readonly("Csn_hi", &GainBounds::Csn_hi)
        .def_readonly("delta_p1", &GainBounds::delta_p1)
        .def_readonly("delta_p2", &GainBounds::delta_p2);

    m.def("derive_constants", &derive_constants);
    m.def("relay_partition", &relay_partition, py::arg("K"), py::arg("M"));
    m.def(
        "sample_channels",
        [](const NetworkConfig& cfg, std::uint64_t stream) {
            const ChannelRealization r = sample_channels(cfg, stream);
            return py::make_tuple(to_numpy(r.H, r.K, r.M), to_numpy(r.F, r.M, r.K));
        },
        py::arg("config"), py::arg("stream"));

    m.def("relay_scale_p1", &relay_scale_p1);
    m.def("relay_scale_p2", &relay_scale_p2);
    m.def("vrelay_scale_p1", &vrelay_scale_p1);
    m.def("vrelay_scale_p2", &vrelay_scale_p2);
    m.def(
        "sinr",
        [](const NetworkConfig& cfg, std::uint64_t stream, int link, const std::string& proto) {
            return sinr(cfg, sample_channels(cfg, stream), link, proto_of(proto)).value;
        },
        py::arg("config"), py::arg("stream"), py::arg("link"), py::arg("protocol"));
    m.def("mutual_information",
          [](double v) { return mutual_information({v, Protocol::P1, 0}); });

    py::class_<ldp::TailBound>(m, "TailBound")
        .def_readonly("bound", &ldp::TailBound::bound)
        .def_readonly("valid_from", &ldp::TailBound::valid_from)
        .def_readonly("exponent_rate", &ldp::TailBound::exponent_rate)
        .def_readonly("power", &ldp::TailBound::power);

    m.def("hoeffding", &ldp::hoeffding);
    m.def("maurer", &ldp::maurer);
    m.def("truncation_bound", &ldp::truncation_bound, py::arg("N"), py::arg("B"),
          py::arg("alpha"), py::arg("beta"), py::arg("A"), py::arg("x"), py::arg("x0") = 0.0);
    m.def("truncation_bound_complex", &ldp::truncation_bound_complex, py::arg("N"), py::arg("B"),
          py::arg("alpha"), py::arg("beta"), py::arg("A"), py::arg("x"), py::arg("x0") = 0.0);
    m.def("truncation_bound_nonneg", &ldp::truncation_bound_nonneg, py::arg("N"), py::arg("B"),
          py::arg("alpha"), py::arg("beta"), py::arg("A"), py::arg("C"), py::arg("x"),
          py::arg("x0") = 0.0);

    py::class_<SinrInterval>(m, "SinrInterval")
        .def_readonly("lower", &SinrInterval::lower)
        .def_readonly("upper", &SinrInterval::upper)
        .def_readonly("fail_prob_bound", &SinrInterval::fail_prob_bound)
        .def_readonly("x", &SinrInterval::x);

    m.def(
        "sinr_interval",
        [](const std::string& proto, double M, double K, double x, const GainBounds& g,
           double sigma2) { return sinr_interval(proto_of(proto), M, K, x, g, sigma2); },
        py::arg("protocol"), py::arg("M"), py::arg("K"), py::arg("x"), py::arg("gains"),
        py::arg("sigma2"));

    py::class_<LinkMoments>(m, "LinkMoments")
        .def_readonly("f_bar", &LinkMoments::f_bar)
        .def_readonly("var_f_tilde", &LinkMoments::var_f_tilde)
        .def_readonly("var_w", &LinkMoments::var_w);
    m.def("p1_moments", &p1_moments, py::arg("config"), py::arg("m") = 0);
    m.def("p2_moments", &p2_moments, py::arg("config"), py::arg("m") = 0);
    m.def("coop_p1_moments", &coop_p1_moments, py::arg("config"), py::arg("m") = 0);
    m.def("medard_lower_bound", &medard_lower_bound);
    m.def("ergodic_lower_p1_finite", &ergodic_lower_p1_finite);
    m.def(
        "ergodic_interval",
        [](const std::string& proto, double M, double K_or_Q, int L, double eps, double delta,
           const GainBounds& g, double sigma2) {
            const CapacityInterval iv =
                ergodic_interval(proto_of(proto), M, K_or_Q, L, eps, delta, g, sigma2);
            return py::make_tuple(iv.lower, iv.upper);
        },
        py::arg("protocol"), py::arg("M"), py::arg("K_or_Q"), py::arg("L"), py::arg("eps"),
        py::arg("delta"), py::arg("gains"), py::arg("sigma2"));
    m.def(
        "outage_bound_p1",
        [](double M, double K, double R, const GainBounds& g, double sigma2) {
            const OutageBound ob = outage_bound_p1(M, K, R, g, sigma2);
            return py::make_tuple(ob.x_of_r, ob.p_out_bound, ob.in_regime);
        },
        py::arg("M"), py::arg("K"), py::arg("R"), py::arg("gains"), py::arg("sigma2"));

    py::class_<af::AfParams>(m, "AfParams")
        .def(py::init([](double beta, double d, double sigma2) {
                 af::AfParams p{beta, d, sigma2};
                 p.validate();
                 return p;
             }),
             py::arg("beta"), py::arg("d"), py::arg("sigma2"))
        .def_readonly("beta", &af::AfParams::beta)
        .def_readonly("d", &af::AfParams::d)
        .def_readonly("sigma2", &af::AfParams::sigma2);

    py::class_<af::DensityCurve>(m, "DensityCurve")
        .def_readonly("grid", &af::DensityCurve::grid)
        .def_readonly("values", &af::DensityCurve::values)
        .def_readonly("atom_at_zero", &af::DensityCurve::atom_at_zero)
        .def_readonly("support", &af::DensityCurve::support)
        .def("total_mass", &af::DensityCurve::total_mass);

    m.def("mp_density", &af::mp_density, py::arg("params"), py::arg("points") = 2001);
    m.def("ft_density", &af::ft_density, py::arg("params"), py::arg("points") = 2001);
    m.def("limiting_density", &af::limiting_density, py::arg("params"), py::arg("y_eps") = -1.0,
          py::arg("points") = 2000);
    m.def("support_upper_bound", &af::support_upper_bound);
    m.def("capacity_beta", &af::capacity_beta, py::arg("params"), py::arg("rel_tol") = 1e-8);
    m.def("capacity_infty", &af::capacity_infty, py::arg("d"), py::arg("sigma2"),
          py::arg("rel_tol") = 1e-10);
    m.def("limit_density_infty", &af::limit_density_infty, py::arg("x"), py::arg("d"));
    m.def(
        "stieltjes_G",
        [](std::complex<double> z, const af::AfParams& p) {
            const af::StieltjesPoint pt = af::stieltjes_G(z, p);
            return py::make_tuple(pt.G, pt.residual);
        },
        py::arg("z"), py::arg("params"));

    m.def(
        "sinr_cdf",
        [](const NetworkConfig& cfg, const std::string& proto, std::uint64_t trials,
           int workers) {
            return mc::sinr_cdf(cfg, proto_of(proto), trials, workers).samples;
        },
        py::arg("config"), py::arg("protocol"), py::arg("trials"), py::arg("workers") = 0);
    m.def(
        "ergodic_estimate",
        [](const NetworkConfig& cfg, const std::string& proto, std::uint64_t trials,
           int workers) {
            const mc::Estimate e = mc::ergodic_estimate(cfg, proto_of(proto), trials, workers);
            return py::make_tuple(e.value, e.stderr_);
        },
        py::arg("config"), py::arg("protocol"), py::arg("trials"), py::arg("workers") = 0);
    m.def(
        "af_capacity_mc",
        [](int M, int K, double d, double sigma2, std::uint64_t trials, std::uint64_t seed,
           int workers) {
            const mc::Estimate e = mc::af_capacity_mc(M, K, d, sigma2, trials, seed, workers);
            return py::make_tuple(e.value, e.stderr_);
        },
        py::arg("M"), py::arg("K"), py::arg("d"), py::arg("sigma2"), py::arg("trials"),
        py::arg("seed") = 0, py::arg("workers") = 0);
    m.def("esd_t_samples", &mc::esd_t_samples, py::arg("M"), py::arg("K"), py::arg("d"),
          py::arg("trials"), py::arg("seed") = 0, py::arg("workers") = 0);
    m.def("esd_mp_samples", &mc::esd_mp_samples, py::arg("N"), py::arg("Nprime"), py::arg("d"),
          py::arg("trials"), py::arg("seed") = 0, py::arg("workers") = 0);
    m.def("esd_product_samples", &mc::esd_product_samples, py::arg("M"), py::arg("K"),
          py::arg("d"), py::arg("trials"), py::arg("seed") = 0, py::arg("workers") = 0);
    m.def(
        "ks_distance",
        [](std::vector<double> samples, const af::DensityCurve& model) {
            return mc::ks_distance(mc::make_cdf(std::move(samples), 0), model);
        },
        py::arg("samples"), py::arg("model"));
}
