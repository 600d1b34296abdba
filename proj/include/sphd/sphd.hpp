#ifndef SPHD_SPHD_HPP
#define SPHD_SPHD_HPP

// Energies, kernel expansions, and t-design machinery for point sets on S^d.

#include "sphd/asymptotics.hpp"
#include "sphd/cap.hpp"
#include "sphd/designs.hpp"
#include "sphd/energy.hpp"
#include "sphd/errors.hpp"
#include "sphd/gammafn.hpp"
#include "sphd/jacobi.hpp"
#include "sphd/kernels.hpp"
#include "sphd/optimize.hpp"
#include "sphd/parallel.hpp"
#include "sphd/point_set.hpp"
#include "sphd/quadrature.hpp"
#include "sphd/serialization.hpp"
#include "sphd/summation.hpp"

#endif
