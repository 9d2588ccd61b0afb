"""Computable rotation theory on compact abelian groups.

Exact group/character arithmetic for the circle, the 2-torus, profinite
integer truncations and the universal solenoid; homeomorphism models given
by lifts; suspension flows with explicit 1-cocycles; rotation number/vector/
element estimators; translation-dynamics diagnostics; semiconjugacy and
bounded-mean-variation checks; and a separated-set entropy estimator.
"""

from rotlab._kernels import HAVE_SPEEDUPS
from rotlab.groups import (CircleChar, CircleGroup, CirclePoint,
                           ProfiniteChar, ProfiniteGroup, ProfiniteInt,
                           SolenoidChar, SolenoidGroup, SolenoidPoint,
                           TorusChar, TorusGroup, TorusPoint, UnitComplex,
                           char_eval, haar_sample, project_level,
                           profinite_add, solenoid_add)
from rotlab.liftparse import parse_lift
from rotlab.maps import (ArnoldFamily, CircleLiftMap, DoublingMap,
                         ParsedLift, RigidRotation, SolenoidLeafMap,
                         Translation, TorusLiftMap, TrigCircleMap, TrigTerm2,
                         displacement, iterate, map_from_dict)
from rotlab.suspension import (SuspensionChar, SuspensionPoint,
                               char_eval_suspension, cocycle, flow,
                               product_measure_sample)

__version__ = "0.1.0"
