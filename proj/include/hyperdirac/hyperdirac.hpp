#pragma once

#include <hyperdirac/degeneration.hpp>
#include <hyperdirac/error.hpp>
#include <hyperdirac/io.hpp>
#include <hyperdirac/lattice_spectra.hpp>
#include <hyperdirac/link_topology.hpp>
#include <hyperdirac/parallel.hpp>
#include <hyperdirac/schrodinger1d.hpp>
#include <hyperdirac/warped_assembly.hpp>
