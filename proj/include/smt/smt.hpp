#pragma once

#include "bench.hpp"
#include "circulant.hpp"
#include "config.hpp"
#include "dense.hpp"
#include "dft.hpp"
#include "entrywise.hpp"
#include "error.hpp"
#include "gallery.hpp"
#include "io.hpp"
#include "operand.hpp"
#include "precond.hpp"
#include "solvers.hpp"
#include "toeplitz.hpp"
