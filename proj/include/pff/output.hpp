/**
 * @file output.hpp
 * @brief History CSV and legacy-VTK field writers.
 */

#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "pff/mesh.hpp"
#include "pff/solver.hpp"

namespace pff {

// Column layout shared by the one-shot and incremental writers.
std::string csv_header();
std::string csv_row(const StepRecord& rec);

// Writes the full history in one pass. Throws std::runtime_error with the
// path on I/O failure.
void write_history_csv(const std::vector<StepRecord>& history,
                       const std::string& path);

// Appends rows as steps converge so an aborted run still leaves a usable
// file. The header goes out on construction; every row is flushed.
class HistoryCsv {
 public:
  explicit HistoryCsv(const std::string& path);
  void append(const StepRecord& rec);

 private:
  std::string path_;
  std::ofstream out_;
};

// Active elements as an ASCII unstructured grid: displacement vectors and
// phi as point data, refinement level as cell data. x holds [u | phi].
void write_fields_vtk(const HierMesh& mesh, const Eigen::VectorXd& x,
                      const std::string& path);

// Geometry-only debug dump (refinement level as cell data).
void write_mesh_vtk(const HierMesh& mesh, const std::string& path);

}  // namespace pff
