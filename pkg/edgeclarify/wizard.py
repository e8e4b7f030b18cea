import data_wizard
from .models import Palette

data_wizard.register(Palette)
