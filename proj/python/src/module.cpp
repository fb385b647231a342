#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "runners.hpp"
#include "spinchain/onebody.hpp"
#include "spinchain/parallel.hpp"

namespace py = pybind11;
using namespace spinchain;

namespace {

std::shared_ptr<const SectorBasis> basis_for(int n_sites, int k) { return enumerate_sector(n_sites, k); }

StateVector as_state(int n_sites, int k, const Eigen::VectorXcd &amps) {
    auto basis = basis_for(n_sites, k);
    if(static_cast<std::size_t>(amps.size()) != basis->dim())
        throw ArgumentError("amplitude vector length does not match the sector dimension C(N, k)");
    return StateVector{basis, amps};
}

EngineKind engine_from(const std::string &s) {
    if(s == "auto") return EngineKind::Auto;
    if(s == "dense") return EngineKind::Dense;
    if(s == "krylov") return EngineKind::Krylov;
    throw ArgumentError("engine must be auto, dense or krylov");
}

PartitionStrategy strategy_from(const std::string &s, int n_sites) {
    auto sel = cli::parse_partitions(s, n_sites);
    if(sel.kind != cli::PartitionSelection::Kind::Strategy) throw ArgumentError("expected all, contiguous or sizes:a,b,c");
    return sel.strategy;
}

py::array_t<std::uint32_t> triples_array(const std::vector<PartitionTriple> &parts) {
    py::array_t<std::uint32_t> out({static_cast<py::ssize_t>(parts.size()), py::ssize_t{3}});
    auto                       v = out.mutable_unchecked<2>();
    for(std::size_t i = 0; i < parts.size(); ++i) {
        const auto r = static_cast<py::ssize_t>(i);
        v(r, 0) = parts[i].a, v(r, 1) = parts[i].b, v(r, 2) = parts[i].c;
    }
    return out;
}

std::vector<PartitionTriple> triples_from(const py::array_t<std::uint32_t, py::array::c_style | py::array::forcecast> &arr) {
    if(arr.ndim() != 2 || arr.shape(1) != 3) throw ArgumentError("partitions must have shape (P, 3)");
    auto                         v = arr.unchecked<2>();
    std::vector<PartitionTriple> out;
    out.reserve(static_cast<std::size_t>(arr.shape(0)));
    for(py::ssize_t i = 0; i < arr.shape(0); ++i) out.push_back(PartitionTriple::canonical(v(i, 0), v(i, 1), v(i, 2)));
    return out;
}

py::dict extrema_dict(const TmiExtrema &e) {
    py::dict d;
    d["min"]    = e.min;
    d["argmin"] = py::make_tuple(e.argmin.a, e.argmin.b, e.argmin.c);
    d["max"]    = e.max;
    d["argmax"] = py::make_tuple(e.argmax.a, e.argmax.b, e.argmax.c);
    return d;
}

py::object cell_object(const cli::Cell &c) {
    return std::visit([](const auto &v) -> py::object { return py::cast(v); }, c);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Sector-resolved XY-chain quench dynamics and tripartite information";

    py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
    py::register_exception<CapacityError>(m, "CapacityError", PyExc_MemoryError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_ArithmeticError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<ModelSpec>(m, "ModelSpec")
        .def_static("power_law", &ModelSpec::power_law, py::arg("n_sites"), py::arg("j0"), py::arg("alpha"))
        .def_static("nearest_neighbour", &ModelSpec::nearest_neighbour, py::arg("n_sites"), py::arg("j0") = 1.0)
        .def_readonly("n_sites", &ModelSpec::n_sites)
        .def_readonly("j0", &ModelSpec::j0)
        .def_readonly("alpha", &ModelSpec::alpha)
        .def_readonly("nn_limit", &ModelSpec::nn_limit)
        .def_property_readonly("label", &ModelSpec::alpha_label)
        .def("__repr__", [](const ModelSpec &s) { return "ModelSpec(n_sites=" + std::to_string(s.n_sites) + ", alpha=" + s.alpha_label() + ")"; });

    m.def(
        "coupling_matrix",
        [](const ModelSpec &s) {
            const auto      c = coupling_matrix(s);
            const int       n = c.n_sites();
            Eigen::MatrixXd j(n, n);
            for(int a = 0; a < n; ++a)
                for(int b = 0; b < n; ++b) j(a, b) = c(a, b);
            return py::make_tuple(j, c.kac);
        },
        py::arg("spec"), "(J matrix, Kac constant)");

    m.def("sector_dimension", &sector_dimension, py::arg("n_sites"), py::arg("k"));
    m.def(
        "sector_states",
        [](int n, int k) {
            const auto b = basis_for(n, k);
            return std::vector<Mask>(b->states().begin(), b->states().end());
        },
        py::arg("n_sites"), py::arg("k"), "Occupation masks of the sector in rank order");
    m.def("neel_mask", &neel_mask, py::arg("n_sites"));
    m.def(
        "neel_state", [](int n) { return neel_state(basis_for(n, popcount(neel_mask(n)))).amplitudes; }, py::arg("n_sites"));
    m.def(
        "single_excitation_state", [](int n, int site) { return single_excitation_state(basis_for(n, 1), site).amplitudes; },
        py::arg("n_sites"), py::arg("site"));

    m.def(
        "evolve",
        [](const ModelSpec &spec, int k, const Eigen::VectorXcd &psi0, std::vector<double> times, bool kac, const std::string &engine,
           double krylov_tol, int krylov_m_max) {
            const auto              psi = as_state(spec.n_sites, k, psi0);
            const SectorHamiltonian h(coupling_matrix(spec), psi.basis);
            EngineOptions           opts;
            opts.kind         = engine_from(engine);
            opts.krylov.tol   = krylov_tol;
            opts.krylov.m_max = krylov_m_max;
            TimeGrid         grid{std::move(times), kac};
            Eigen::MatrixXcd out(static_cast<Eigen::Index>(grid.size()), psi0.size());
            {
                py::gil_scoped_release release;
                (void)for_each_state(h, psi, grid, opts,
                                     [&](std::size_t i, const StateVector &s) { out.row(static_cast<Eigen::Index>(i)) = s.amplitudes.transpose(); });
            }
            return out;
        },
        py::arg("spec"), py::arg("k"), py::arg("psi0"), py::arg("times"), py::arg("kac") = false, py::arg("engine") = "auto",
        py::arg("krylov_tol") = 1e-10, py::arg("krylov_m_max") = 40, "States at the given times, one row per time");

    m.def(
        "apply_hamiltonian",
        [](const ModelSpec &spec, int k, const Eigen::VectorXcd &psi) {
            const auto s = as_state(spec.n_sites, k, psi);
            return apply_hamiltonian(coupling_matrix(spec), *s.basis, s).amplitudes;
        },
        py::arg("spec"), py::arg("k"), py::arg("psi"));

    m.def("onebody_propagator", [](const ModelSpec &spec, double t) { return onebody_propagator(coupling_matrix(spec), t); }, py::arg("spec"),
          py::arg("t"));

    m.def(
        "entanglement_entropy",
        [](int n, int k, const Eigen::VectorXcd &psi, Mask a) { return entanglement_entropy(as_state(n, k, psi), SiteSubset{a}); },
        py::arg("n_sites"), py::arg("k"), py::arg("psi"), py::arg("mask"), "Von Neumann entropy in bits");
    m.def(
        "schmidt_weights",
        [](int n, int k, const Eigen::VectorXcd &psi, Mask a) { return subsystem_spectrum(as_state(n, k, psi), SiteSubset{a}).weights; },
        py::arg("n_sites"), py::arg("k"), py::arg("psi"), py::arg("mask"));
    m.def(
        "entropy_table",
        [](int n, int k, const Eigen::VectorXcd &psi) {
            const auto s = as_state(n, k, psi);
            std::vector<double> out;
            {
                py::gil_scoped_release release;
                const auto             t = subset_entropy_table(s);
                out.assign(t.entries().begin(), t.entries().end());
            }
            return py::array_t<double>(static_cast<py::ssize_t>(out.size()), out.data());
        },
        py::arg("n_sites"), py::arg("k"), py::arg("psi"), "All 2^N subset entropies indexed by mask");

    auto checked_table = [](const py::array_t<double, py::array::c_style | py::array::forcecast> &t) {
        const auto sz = static_cast<std::size_t>(t.size());
        if(sz < 2 || (sz & (sz - 1)) != 0) throw ArgumentError("entropy table length must be a power of two");
        return SubsetEntropyTable(std::countr_zero(sz), std::vector<double>(t.data(), t.data() + sz));
    };
    m.def(
        "mutual_information",
        [checked_table](const py::array_t<double, py::array::c_style | py::array::forcecast> &t, Mask a, Mask b) {
            return mutual_information(checked_table(t), SiteSubset{a}, SiteSubset{b});
        },
        py::arg("table"), py::arg("a"), py::arg("b"));
    m.def(
        "tmi",
        [checked_table](const py::array_t<double, py::array::c_style | py::array::forcecast> &t, Mask a, Mask b, Mask c) {
            return tmi(checked_table(t), SiteSubset{a}, SiteSubset{b}, SiteSubset{c});
        },
        py::arg("table"), py::arg("a"), py::arg("b"), py::arg("c"));
    m.def(
        "monogamy_gap",
        [checked_table](const py::array_t<double, py::array::c_style | py::array::forcecast> &t, Mask a, Mask b, Mask c) {
            return monogamy_gap(checked_table(t), SiteSubset{a}, SiteSubset{b}, SiteSubset{c});
        },
        py::arg("table"), py::arg("a"), py::arg("b"), py::arg("c"));

    m.def("binary_entropy", &binary_entropy, py::arg("p"));
    m.def(
        "tmi_binary", [](double pa, double pb, double pc) { return tmi_binary({pa, pb, pc}); }, py::arg("p_a"), py::arg("p_b"), py::arg("p_c"));

    m.def("all_assignments_count", &all_assignments_count, py::arg("n_sites"));
    m.def(
        "enumerate_partitions", [](int n, const std::string &s) { return triples_array(enumerate_partitions(n, strategy_from(s, n))); },
        py::arg("n_sites"), py::arg("strategy") = "all", "Canonical (a, b, c) masks, shape (P, 3)");
    m.def(
        "contiguous_quarters",
        [](int n) {
            const auto p = contiguous_quarters(n);
            return py::make_tuple(p.a, p.b, p.c);
        },
        py::arg("n_sites"));
    m.def(
        "minmax_tmi",
        [checked_table](const py::array_t<double, py::array::c_style | py::array::forcecast> &t,
                        const py::array_t<std::uint32_t, py::array::c_style | py::array::forcecast> &parts) {
            const auto table = checked_table(t);
            const auto list  = triples_from(parts);
            TmiExtrema e;
            {
                py::gil_scoped_release release;
                e = minmax_tmi(table, list);
            }
            return extrema_dict(e);
        },
        py::arg("table"), py::arg("partitions"));
    m.def(
        "lightcone_onset", [](const ModelSpec &s, Mask a, Mask b, Mask c) { return lightcone_onset(s, PartitionTriple::canonical(a, b, c)); },
        py::arg("spec"), py::arg("a"), py::arg("b"), py::arg("c"));
    m.def(
        "tau_sign_change",
        [](std::vector<double> times, std::vector<double> mins, double threshold) {
            TmiSeries s;
            s.grid.times = std::move(times);
            for(double v : mins) s.extrema.push_back({v, {}, v, {}});
            return tau_sign_change(s, threshold);
        },
        py::arg("times"), py::arg("min_tmi"), py::arg("threshold") = 0.0);

    m.def(
        "onebody_scan",
        [](const ModelSpec &spec, int site, std::vector<double> times, bool kac, const std::string &strategy) {
            const auto  parts = enumerate_partitions(spec.n_sites, strategy_from(strategy, spec.n_sites));
            TimeGrid    grid{std::move(times), kac};
            OnebodyScan scan;
            {
                py::gil_scoped_release release;
                scan = onebody_tmi_scan(coupling_matrix(spec), site, grid, parts);
            }
            py::list ex;
            for(const auto &e : scan.series.extrema) ex.append(extrema_dict(e));
            py::dict d;
            d["extrema"]        = ex;
            d["global_min"]     = scan.global_min;
            d["min_time_index"] = scan.min_time_index;
            d["min_partition"]  = py::make_tuple(scan.min_partition.a, scan.min_partition.b, scan.min_partition.c);
            d["occupations"]    = scan.occupations;
            return d;
        },
        py::arg("spec"), py::arg("site"), py::arg("times"), py::arg("kac") = false, py::arg("strategy") = "all");

    m.def(
        "run",
        [](const std::string &command, const std::map<std::string, std::string> &options) {
            std::optional<cli::Command> cmd;
            for(auto c : {cli::Command::TmiGrid, cli::Command::TmiVsEntropy, cli::Command::MinmaxScan, cli::Command::OnebodyScan,
                          cli::Command::Validate})
                if(command == cli::command_name(c)) cmd = c;
            if(!cmd) throw ConfigError("unknown command '" + command + "'");
            const auto     cfg = cli::resolve_config(options, *cmd);
            cli::RunOutput out;
            {
                py::gil_scoped_release release;
                out = cli::run(*cmd, cfg);
            }
            py::dict result;
            for(const auto &d : out.datasets) {
                py::list rows;
                for(const auto &r : d.rows) {
                    py::list row;
                    for(const auto &c : r) row.append(cell_object(c));
                    rows.append(row);
                }
                py::dict ds;
                ds["columns"]   = d.columns;
                ds["rows"]      = rows;
                ds["meta"]      = d.meta.dump();
                result[py::str(d.name)] = ds;
            }
            py::dict top;
            top["datasets"] = result;
            top["summary"]  = out.summary;
            top["failure"]  = out.failure ? py::object(py::str(*out.failure)) : py::none();
            return top;
        },
        py::arg("command"), py::arg("options"),
        "Runs a CLI subcommand in-process. options uses the long flag names without dashes, e.g. {'n-sites': '8'}");

    m.def("thread_count", &thread_count);
}
