#ifndef VEXLAB_VEXLAB_HPP
#define VEXLAB_VEXLAB_HPP

#include "vexlab/cascade.hpp"
#include "vexlab/config.hpp"
#include "vexlab/core.hpp"
#include "vexlab/domain.hpp"
#include "vexlab/exponent_field.hpp"
#include "vexlab/experiments.hpp"
#include "vexlab/fem.hpp"
#include "vexlab/functional.hpp"
#include "vexlab/mesh.hpp"
#include "vexlab/mesh_io.hpp"
#include "vexlab/modular.hpp"
#include "vexlab/nehari.hpp"
#include "vexlab/pohozaev.hpp"
#include "vexlab/quadrature.hpp"
#include "vexlab/solvers.hpp"

#endif  // VEXLAB_VEXLAB_HPP
