/**
 * @file output.cpp
 * @brief History CSV and legacy-VTK field writers.
 */

#include "pff/output.hpp"

#include <cstdio>
#include <stdexcept>

namespace pff {

namespace {

// %.17g keeps doubles bit-exact across write/read and locale-independent.
std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* mode_name(StepMode m) {
  return m == StepMode::displacement ? "displacement" : "arclength";
}

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

}  // namespace

std::string csv_header() {
  return "step,lambda_mm,load_N,delta_G,iterations,beta,delta_tau,mode,ndof";
}

std::string csv_row(const StepRecord& r) {
  return std::to_string(r.step) + "," + num(r.lambda) + "," + num(r.load) +
         "," + num(r.dG) + "," + std::to_string(r.iterations) + "," +
         num(r.beta) + "," + num(r.dtau) + "," + mode_name(r.mode) + "," +
         std::to_string(r.ndof);
}

void write_history_csv(const std::vector<StepRecord>& history,
                       const std::string& path) {
  std::ofstream out = open_or_throw(path);
  out << csv_header() << "\n";
  for (const StepRecord& r : history) out << csv_row(r) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

HistoryCsv::HistoryCsv(const std::string& path)
    : path_(path), out_(path) {
  if (!out_) throw std::runtime_error("cannot open for writing: " + path);
  out_ << csv_header() << "\n";
  out_.flush();
}

void HistoryCsv::append(const StepRecord& rec) {
  out_ << csv_row(rec) << "\n";
  out_.flush();
  if (!out_) throw std::runtime_error("write failed: " + path_);
}

namespace {

void write_vtk(const HierMesh& mesh, const Eigen::VectorXd* x,
               const std::string& path) {
  std::ofstream out = open_or_throw(path);
  const std::vector<int> act = mesh.active_elems();
  const int n_nodes = static_cast<int>(mesh.nodes.size());

  out << "# vtk DataFile Version 3.0\n"
      << "phase-field state\n"
      << "ASCII\n"
      << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << n_nodes << " double\n";
  for (const Node& n : mesh.nodes) {
    out << num(n.x) << " " << num(n.y) << " 0\n";
  }
  out << "CELLS " << act.size() << " " << 5 * act.size() << "\n";
  for (int e : act) {
    const auto& c = mesh.elems[e].corners;
    out << "4 " << c[0] << " " << c[1] << " " << c[2] << " " << c[3] << "\n";
  }
  out << "CELL_TYPES " << act.size() << "\n";
  for (std::size_t i = 0; i < act.size(); ++i) out << "9\n";

  if (x) {
    out << "POINT_DATA " << n_nodes << "\n";
    out << "VECTORS displacement double\n";
    for (int n = 0; n < n_nodes; ++n) {
      out << num((*x)[2 * n]) << " " << num((*x)[2 * n + 1]) << " 0\n";
    }
    out << "SCALARS phi double 1\n"
        << "LOOKUP_TABLE default\n";
    for (int n = 0; n < n_nodes; ++n) {
      out << num((*x)[2 * n_nodes + n]) << "\n";
    }
  }
  out << "CELL_DATA " << act.size() << "\n"
      << "SCALARS level int 1\n"
      << "LOOKUP_TABLE default\n";
  for (int e : act) out << mesh.elems[e].level << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

void write_fields_vtk(const HierMesh& mesh, const Eigen::VectorXd& x,
                      const std::string& path) {
  write_vtk(mesh, &x, path);
}

void write_mesh_vtk(const HierMesh& mesh, const std::string& path) {
  write_vtk(mesh, nullptr, path);
}

}  // namespace pff
