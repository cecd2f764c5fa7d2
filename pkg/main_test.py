import unittest

from tests.axioms_test import TestAxioms  # noqa
from tests.behaviors_test import TestBehaviors  # noqa
from tests.classifier_test import TestClassifier  # noqa
from tests.csp_test import TestCsp  # noqa
from tests.engine_test import TestEngine  # noqa
from tests.formulas_test import TestFormulas  # noqa
from tests.globals_test import TestGlobals  # noqa
from tests.model_test import TestModel  # noqa
from tests.structures_test import TestStructures  # noqa
from tests.transformations_test import TestTransformations  # noqa
from tests.ui_test import TestUi  # noqa
from tests.utils_test import TestUtils  # noqa

if __name__ == "__main__":
    unittest.main()
